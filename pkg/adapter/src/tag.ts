/**
 * Light part-of-speech tagger.
 *
 * Lexicon lookups for closed classes, suffix heuristics for open ones,
 * defaulting to NOUN. Built for the extraction patterns downstream, not for
 * general-purpose tagging: it only needs to get determiners, prepositions,
 * verbs, participles, and noun phrases right often enough to mine tuples.
 */

import type { Tag, Token } from './types.js';

const DETERMINERS = new Set([
  'a', 'an', 'the', 'this', 'that', 'these', 'those', 'its', 'his', 'her',
  'their', 'our', 'my', 'your', 'some', 'any', 'each', 'every', 'no',
]);

const PREPOSITIONS = new Set([
  'of', 'in', 'on', 'at', 'by', 'for', 'with', 'from', 'to', 'into',
  'about', 'against', 'between', 'through', 'under', 'over', 'near',
  'behind', 'during', 'without', 'within', 'toward', 'towards',
]);

const PRONOUNS = new Set([
  'he', 'she', 'him', 'her', 'it', 'they', 'them', 'we', 'us', 'i', 'you',
]);

const COPULAS = new Set(['is', 'are', 'was', 'were', 'be', 'been', 'being',
  'am', 'remains', 'remained', 'becomes', 'became', 'seems', 'seemed']);

const AUXILIARIES = new Set(['has', 'have', 'had', 'will', 'would', 'can',
  'could', 'may', 'might', 'must', 'shall', 'should', 'do', 'does', 'did']);

const CONJUNCTIONS = new Set(['and', 'or', 'but', 'nor', 'so', 'yet',
  'because', 'while', 'when', 'after', 'before', 'that', 'which', 'who']);

/** Irregular past participles the pattern matcher must recognize. */
export const PARTICIPLES = new Set([
  'stolen', 'taken', 'given', 'written', 'known', 'shown', 'seen', 'born',
  'held', 'kept', 'sent', 'sold', 'bought', 'caught', 'found', 'paid',
  'made', 'run', 'hidden', 'driven', 'drawn', 'thrown', 'chosen', 'built',
  'accused', 'linked', 'tied', 'connected', 'involved', 'implicated',
]);

/** Verbs whose base form the suffix rules would misread as nouns. */
const VERB_LEXICON = new Set([
  'met', 'led', 'ran', 'ate', 'saw', 'said', 'told', 'wrote', 'spoke',
  'sued', 'paid', 'sold', 'bought', 'sought', 'gave', 'took', 'stole',
  'held', 'kept', 'sent', 'left', 'won', 'lost', 'hid', 'drew', 'threw',
  'knew', 'began', 'owns', 'own', 'runs', 'leads', 'meets', 'denies',
  'denied', 'claims', 'claimed', 'reported', 'reports', 'leaked', 'leaks',
  'hired', 'hires', 'funded', 'funds', 'visited', 'visits', 'emailed',
  'emails', 'ordered', 'orders', 'managed', 'manages', 'organized',
  'exposed', 'arrested', 'investigated', 'covered', 'protected',
]);

const ADVERBS = new Set(['not', 'never', 'also', 'often', 'later',
  'secretly', 'allegedly', 'reportedly', 'quietly', 'then']);

function isCapitalized(word: string): boolean {
  return /^[A-Z]/.test(word);
}

/** Nouns and function words the -ed/-ing suffix rule would misread. */
const NON_VERBS = new Set(['everything', 'nothing', 'something', 'anything',
  'thing', 'morning', 'evening', 'meeting', 'building', 'wedding',
  'painting', 'feeling', 'ceiling', 'king', 'ring', 'spring', 'string',
  'wing', 'hundred', 'indeed', 'naked', 'wicked', 'sacred']);

function looksVerbal(lower: string): boolean {
  if (VERB_LEXICON.has(lower)) return true;
  if (NON_VERBS.has(lower)) return false;
  return /(?:ed|ing)$/.test(lower) && lower.length > 4;
}

/**
 * "her" is possessive before a nominal ("her campaign") and an object
 * pronoun otherwise ("met her.", "met her at the rally").
 */
function followedByNominal(words: string[], i: number): boolean {
  const next = words[i + 1];
  if (next === undefined) return false;
  const lower = next.toLowerCase();
  if (/^[^A-Za-z0-9]$/.test(next)) return false;
  if (PREPOSITIONS.has(lower) || CONJUNCTIONS.has(lower)) return false;
  if (COPULAS.has(lower) || AUXILIARIES.has(lower)) return false;
  if (ADVERBS.has(lower) || looksVerbal(lower)) return false;
  return true;
}

/**
 * Tag one sentence of raw tokens.
 *
 * Sentence-initial capitalization is not evidence of a proper noun; a
 * capitalized word mid-sentence is, unless the lexicon claims it first.
 */
export function tagTokens(words: string[]): Token[] {
  const tokens: Token[] = [];
  for (let i = 0; i < words.length; i++) {
    const text = words[i];
    const lower = text.toLowerCase();
    let tag: Tag;
    if (/^[^A-Za-z0-9]$/.test(text)) tag = 'PUNCT';
    else if (lower === 'her' && !followedByNominal(words, i)) tag = 'PRON';
    else if (DETERMINERS.has(lower)) tag = 'DET';
    else if (PREPOSITIONS.has(lower)) tag = 'PREP';
    else if (PRONOUNS.has(lower)) tag = 'PRON';
    else if (COPULAS.has(lower)) tag = 'COPULA';
    else if (AUXILIARIES.has(lower)) tag = 'AUX';
    else if (CONJUNCTIONS.has(lower)) tag = 'CONJ';
    else if (ADVERBS.has(lower)) tag = 'ADV';
    else if (PARTICIPLES.has(lower)) tag = 'PARTICIPLE';
    else if (i > 0 && isCapitalized(text)) tag = 'PROPER';
    else if (looksVerbal(lower)) tag = 'VERB';
    else if (i === 0 && isCapitalized(text) && /^[A-Z]/.test(words[i + 1] ?? '')) {
      // Sentence-initial word followed by another capitalized word reads as
      // the start of a name ("John Podesta met ...").
      tag = 'PROPER';
    } else tag = 'NOUN';
    tokens.push({ text, tag, index: i, fromPronoun: false });
  }
  return tokens;
}
