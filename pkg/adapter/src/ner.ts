/**
 * Heuristic named-entity typing for extracted phrases.
 *
 * Assigns person / organization / location from small lexicons and surface
 * cues; anything else is left untyped (null), which downstream consumers
 * treat as an ordinary common phrase.
 */

import type { Token } from './types.js';

export const FEMALE_NAMES = new Set([
  'mary', 'janet', 'hillary', 'sarah', 'emily', 'laura', 'susan', 'anna',
  'karen', 'alice', 'nancy', 'diane', 'carol', 'helen', 'ruth', 'clara',
]);

export const MALE_NAMES = new Set([
  'john', 'james', 'bill', 'george', 'david', 'tony', 'peter', 'michael',
  'robert', 'alex', 'mark', 'paul', 'steve', 'frank', 'henry', 'victor',
  'martin', 'oscar', 'walter', 'carl',
]);

const HONORIFICS = new Set(['mr', 'mrs', 'ms', 'dr', 'sen', 'gov', 'rep',
  'prof', 'gen', 'judge', 'mayor', 'senator', 'governor', 'president']);

const ORG_CUES = new Set(['inc', 'corp', 'committee', 'foundation', 'agency',
  'department', 'bureau', 'party', 'network', 'news', 'media', 'group',
  'fund', 'council', 'institute', 'association', 'bank', 'times', 'post',
  'herald', 'campaign', 'commission', 'company', 'university']);

const LOCATIONS = new Set(['washington', 'york', 'london', 'moscow', 'paris',
  'texas', 'virginia', 'maryland', 'chicago', 'denver', 'boston', 'atlanta',
  'seattle', 'ohio', 'florida', 'california', 'brooklyn', 'manhattan',
  'geneva', 'vienna', 'riverton', 'ashford', 'millbrook', 'cedarville']);

function lower(t: Token): string {
  return t.text.toLowerCase().replace(/[.'’]/g, '');
}

function isAcronym(word: string): boolean {
  return /^[A-Z]{2,6}$/.test(word);
}

/**
 * Type a phrase from its tokens. Only phrases headed by a proper noun
 * receive a type; common phrases stay null.
 */
export function nerType(tokens: Token[]): string | null {
  if (tokens.length === 0) return null;
  if (!tokens.some((t) => t.tag === 'PROPER' || isAcronym(t.text))) {
    return null;
  }
  const lowers = tokens.map(lower);
  if (lowers.some((w) => ORG_CUES.has(w))) return 'organization';
  if (tokens.some((t) => isAcronym(t.text))) return 'organization';
  if (lowers.some((w) => LOCATIONS.has(w))) return 'location';
  if (lowers.some((w) => HONORIFICS.has(w))) return 'person';
  if (lowers.some((w) => FEMALE_NAMES.has(w) || MALE_NAMES.has(w))) {
    return 'person';
  }
  // Two capitalized words with no other cue read as a personal name.
  if (tokens.length === 2 && tokens.every((t) => t.tag === 'PROPER')) {
    return 'person';
  }
  return null;
}

/** Gender bucket of a person phrase, for pronoun resolution. */
export function personGender(tokens: Token[]): 'female' | 'male' | null {
  for (const t of tokens) {
    const w = lower(t);
    if (FEMALE_NAMES.has(w)) return 'female';
    if (MALE_NAMES.has(w)) return 'male';
    if (w === 'mrs' || w === 'ms') return 'female';
    if (w === 'mr') return 'male';
  }
  return null;
}
