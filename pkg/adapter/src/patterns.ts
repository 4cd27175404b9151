/**
 * Tuple extraction patterns over one tagged, pronoun-resolved sentence.
 *
 * Four shapes are mined:
 *  - verb with direct object            "X hired Y"            -> SVO
 *  - verb or copula with preposition    "X was Y", "X met with Y" -> SVP
 *  - participle attached to a noun      "emails stolen from Y" -> SVP
 *  - appositive after a proper phrase   "X, chair of Y"        -> other
 *
 * Subjects keep their determiner and stay un-extended (core NP only);
 * objects drop a leading determiner and absorb chained "of" complements.
 */

import { chunkNounPhrases, withOfComplement } from './chunk.js';
import { headWord, lemma, normalizeObject, normalizeSubject } from './normalize.js';
import { nerType } from './ner.js';
import type { NounPhrase, Token } from './types.js';

export interface PhraseMention {
  text: string;
  head: string;
  nerType: string | null;
  fromPronoun: boolean;
}

export interface Match {
  arg1: PhraseMention;
  relText: string;
  relVerbs: string[];
  arg2: PhraseMention;
  pattern: 'SVO' | 'SVP' | 'other';
  span: [number, number];
}

function mention(
  fullTokens: Token[],
  core: NounPhrase,
  normalize: (tokens: Token[]) => string,
): PhraseMention {
  return {
    text: normalize(fullTokens),
    head: headWord(core.tokens),
    nerType: nerType(core.tokens),
    fromPronoun: fullTokens.some((t) => t.fromPronoun),
  };
}

/** Nearest plausible subject chunk strictly left of a token position. */
function subjectBefore(chunks: NounPhrase[], pos: number, tokens: Token[]):
    NounPhrase | null {
  for (let i = chunks.length - 1; i >= 0; i--) {
    const c = chunks[i];
    if (c.end > pos) continue;
    if (c.inPP) continue;
    // A chunk right after a comma is an appositive, not the subject.
    if (tokens[c.start - 1]?.text === ',') continue;
    return c;
  }
  return null;
}

/** Object phrase starting at a token position, with "of" chaining. */
function objectAt(chunks: NounPhrase[], pos: number, tokens: Token[]):
    { core: NounPhrase; span: Token[]; end: number } | null {
  const idx = chunks.findIndex((c) => c.start === pos);
  if (idx < 0) return null;
  const { span, lastPhrase } = withOfComplement(chunks, idx, tokens);
  return { core: chunks[idx], span, end: chunks[lastPhrase].end };
}

export function extractMatches(tokens: Token[]): Match[] {
  const chunks = chunkNounPhrases(tokens);
  const matches: Match[] = [];

  for (const token of tokens) {
    if (token.tag === 'VERB' || token.tag === 'COPULA') {
      const subject = subjectBefore(chunks, token.index, tokens);
      if (!subject) continue;
      // Allow one adverb between the verb and its complement.
      let after = token.index + 1;
      if (tokens[after]?.tag === 'ADV') after++;
      const direct = objectAt(chunks, after, tokens);
      if (direct) {
        matches.push({
          arg1: mention(subject.tokens, subject, normalizeSubject),
          relText: token.text,
          relVerbs: [lemma(token.text)],
          arg2: mention(direct.span, direct.core, normalizeObject),
          pattern: token.tag === 'COPULA' ? 'SVP' : 'SVO',
          span: [subject.start, direct.end],
        });
        continue;
      }
      const prep = tokens[after];
      if (prep?.tag === 'PREP') {
        const obj = objectAt(chunks, prep.index + 1, tokens);
        if (obj) {
          matches.push({
            arg1: mention(subject.tokens, subject, normalizeSubject),
            relText: `${token.text} ${prep.text}`,
            relVerbs: [lemma(token.text)],
            arg2: mention(obj.span, obj.core, normalizeObject),
            pattern: 'SVP',
            span: [subject.start, obj.end],
          });
        }
      }
    } else if (token.tag === 'PARTICIPLE') {
      // Reduced relative: "[the cache of] e-mails stolen from John Podesta".
      const attached = chunks.find((c) => c.end === token.index);
      const prep = tokens[token.index + 1];
      if (!attached || prep?.tag !== 'PREP') continue;
      const obj = objectAt(chunks, prep.index + 1, tokens);
      if (!obj) continue;
      matches.push({
        arg1: mention(attached.tokens, attached, normalizeObject),
        relText: `${token.text} ${prep.text}`,
        relVerbs: [lemma(token.text)],
        arg2: mention(obj.span, obj.core, normalizeObject),
        pattern: 'SVP',
        span: [attached.start, obj.end],
      });
    }
  }

  // Appositives: proper phrase, comma, common phrase -> an implied "is".
  for (let i = 0; i + 1 < chunks.length; i++) {
    const left = chunks[i];
    const right = chunks[i + 1];
    if (!left.proper || right.proper) continue;
    if (tokens[left.end]?.text !== ',' || right.start !== left.end + 1) {
      continue;
    }
    const extended = withOfComplement(chunks, i + 1, tokens);
    matches.push({
      arg1: mention(left.tokens, left, normalizeSubject),
      relText: 'is',
      relVerbs: ['be'],
      arg2: mention(extended.span, right, normalizeObject),
      pattern: 'other',
      span: [left.start, chunks[extended.lastPhrase].end],
    });
  }

  return matches;
}
