/**
 * Noun-phrase chunker.
 *
 * A core NP is an optional determiner followed by a run of nouns/propers;
 * the head is the run's last token. Of-PP complements ("cache of e-mails")
 * are attached on demand by {@link withOfComplement} so patterns can decide
 * per slot whether they want the extended phrase.
 */

import type { NounPhrase, Token } from './types.js';

const NOMINAL = new Set(['NOUN', 'PROPER']);

/** Find all core noun phrases in a tagged sentence, left to right. */
export function chunkNounPhrases(tokens: Token[]): NounPhrase[] {
  const phrases: NounPhrase[] = [];
  let i = 0;
  while (i < tokens.length) {
    const start = i;
    let j = i;
    if (tokens[j]?.tag === 'DET') j++;
    const nominalStart = j;
    while (j < tokens.length && NOMINAL.has(tokens[j].tag)) j++;
    if (j > nominalStart) {
      const span = tokens.slice(start, j);
      phrases.push({
        start,
        end: j,
        tokens: span,
        inPP: tokens[start - 1]?.tag === 'PREP',
        proper: span[span.length - 1].tag === 'PROPER',
        fromPronoun: span.some((t) => t.fromPronoun),
      });
      i = j;
    } else {
      i = start + 1;
    }
  }
  return phrases;
}

/**
 * Extend a phrase with chained "of" complements when the following tokens
 * are literally `of <next phrase>`. Returns the index range of phrases
 * consumed and the full token span.
 */
export function withOfComplement(
  phrases: NounPhrase[],
  index: number,
  tokens: Token[],
): { span: Token[]; lastPhrase: number } {
  let last = index;
  while (
    last + 1 < phrases.length &&
    tokens[phrases[last].end]?.text.toLowerCase() === 'of' &&
    phrases[last + 1].start === phrases[last].end + 1
  ) {
    last++;
  }
  return {
    span: tokens.slice(phrases[index].start, phrases[last].end),
    lastPhrase: last,
  };
}
