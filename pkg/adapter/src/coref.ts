/**
 * Pronoun resolution within one post.
 *
 * Recency heuristic: a gendered pronoun takes the most recent person
 * mention of the matching gender from an EARLIER sentence. Restricting
 * antecedents to earlier sentences keeps "Laura praised her" from binding
 * "her" to Laura herself. Matched pronoun tokens are replaced in-line by a
 * copy of the antecedent's tokens, each marked fromPronoun so downstream
 * output can flag substituted arguments. Unmatched pronouns (no antecedent
 * yet, or they/them/it) are left alone.
 */

import { personGender } from './ner.js';
import type { Token } from './types.js';

const FEMALE_PRONOUNS = new Set(['she', 'her', 'hers']);
const MALE_PRONOUNS = new Set(['he', 'him']);

function properRuns(tokens: Token[]): Token[][] {
  const runs: Token[][] = [];
  let current: Token[] = [];
  for (const t of tokens) {
    if (t.tag === 'PROPER' && !t.fromPronoun) {
      current.push(t);
    } else {
      if (current.length > 0) runs.push(current);
      current = [];
    }
  }
  if (current.length > 0) runs.push(current);
  return runs;
}

function substitute(antecedent: Token[]): Token[] {
  return antecedent.map((t) => ({
    text: t.text,
    tag: 'PROPER' as const,
    index: -1,
    fromPronoun: true,
  }));
}

/**
 * Resolve pronouns across a post's sentences, in reading order.
 * Returns new token arrays with indices rebuilt.
 */
export function resolvePronouns(sentences: Token[][]): Token[][] {
  let female: Token[] | null = null;
  let male: Token[] | null = null;
  const out: Token[][] = [];
  for (const sentence of sentences) {
    const resolved: Token[] = [];
    for (const token of sentence) {
      const word = token.text.toLowerCase();
      let replacement: Token[] | null = null;
      if (token.tag === 'PRON') {
        if (FEMALE_PRONOUNS.has(word)) replacement = female;
        else if (MALE_PRONOUNS.has(word)) replacement = male;
      }
      if (replacement) {
        resolved.push(...substitute(replacement));
      } else {
        resolved.push({ ...token });
      }
    }
    // Mentions become candidate antecedents only after their sentence
    // closes; substituted copies never re-register.
    for (const run of properRuns(resolved)) {
      const gender = personGender(run);
      if (gender === 'female') female = run;
      else if (gender === 'male') male = run;
    }
    resolved.forEach((t, i) => {
      t.index = i;
    });
    out.push(resolved);
  }
  return out;
}
