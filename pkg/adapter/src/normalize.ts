/**
 * Surface-form cleanup for extracted phrases and relations.
 *
 * Subjects keep their determiner ("The spark"); objects drop a leading
 * determiner ("the cache of e-mails" -> "cache of emails"). Both sides are
 * dehyphenated and lose possessive markers ("Clinton's" -> "Clinton").
 */

import type { Token } from './types.js';

const DETERMINER_WORDS = new Set(['a', 'an', 'the', 'this', 'that', 'these',
  'those', 'some', 'any', 'each', 'every']);

/** Irregular verb lemmas the extraction patterns emit. */
const LEMMA_OVERRIDES: Record<string, string> = {
  is: 'be', are: 'be', was: 'be', were: 'be', am: 'be', been: 'be',
  being: 'be', met: 'meet', led: 'lead', ran: 'run', ate: 'eat',
  saw: 'see', said: 'say', told: 'tell', wrote: 'write', spoke: 'speak',
  gave: 'give', took: 'take', stole: 'steal', stolen: 'steal',
  taken: 'take', given: 'give', written: 'write', known: 'know',
  shown: 'show', seen: 'see', held: 'hold', kept: 'keep', sent: 'send',
  sold: 'sell', bought: 'buy', caught: 'catch', found: 'find',
  paid: 'pay', made: 'make', hidden: 'hide', driven: 'drive',
  drawn: 'draw', thrown: 'throw', chosen: 'choose', built: 'build',
  left: 'leave', won: 'win', lost: 'lose', hid: 'hide', drew: 'draw',
  threw: 'throw', knew: 'know', began: 'begin', sought: 'seek',
  sued: 'sue', born: 'bear', hired: 'hire', hires: 'hire',
  exposed: 'expose', managed: 'manage', manages: 'manage',
  organized: 'organize', accused: 'accuse', involved: 'involve',
  implicated: 'implicate', denied: 'deny', denies: 'deny', tied: 'tie',
  renovated: 'renovate', investigated: 'investigate', owned: 'own',
  financed: 'finance', promoted: 'promote', silenced: 'silence',
  pressured: 'pressure', summoned: 'summon', shared: 'share',
  received: 'receive', released: 'release', arranged: 'arrange',
  operated: 'operate', donated: 'donate', advised: 'advise',
  praised: 'praise', quoted: 'quote', traced: 'trace',
};

function cleanWord(word: string): string {
  let w = word;
  // Possessive marker: Clinton's -> Clinton, senators' -> senators.
  w = w.replace(/['’]s$/i, '').replace(/['’]$/, '');
  // Hyphenated compounds collapse: e-mails -> emails.
  w = w.replace(/-/g, '');
  return w;
}

function joinTokens(tokens: Token[]): string {
  return tokens
    .map((t) => cleanWord(t.text))
    .filter((w) => w.length > 0)
    .join(' ')
    .replace(/\s+/g, ' ')
    .trim();
}

/** Subject phrases keep the determiner. */
export function normalizeSubject(tokens: Token[]): string {
  return joinTokens(tokens);
}

/** Object phrases drop a leading determiner. */
export function normalizeObject(tokens: Token[]): string {
  let body = tokens;
  if (body.length > 1 && DETERMINER_WORDS.has(body[0].text.toLowerCase())) {
    body = body.slice(1);
  }
  return joinTokens(body);
}

/**
 * Head word of a core NP: its last nominal token, cleaned and lowercased.
 * Falls back to the last token when no nominal is present.
 */
export function headWord(tokens: Token[]): string {
  for (let i = tokens.length - 1; i >= 0; i--) {
    if (tokens[i].tag === 'NOUN' || tokens[i].tag === 'PROPER') {
      return cleanWord(tokens[i].text).toLowerCase();
    }
  }
  return cleanWord(tokens[tokens.length - 1].text).toLowerCase();
}

/** Lemmatize a verb token for the rel_verbs field. */
export function lemma(verb: string): string {
  const lower = verb.toLowerCase();
  if (LEMMA_OVERRIDES[lower]) return LEMMA_OVERRIDES[lower];
  if (/ies$/.test(lower) && lower.length > 4) return lower.slice(0, -3) + 'y';
  if (/(?:sses|shes|ches|xes)$/.test(lower)) return lower.slice(0, -2);
  if (/ed$/.test(lower) && lower.length > 3) {
    const stem = lower.slice(0, -2);
    // doubled final consonant: planned -> plan
    if (/([bdfglmnprt])\1$/.test(stem)) return stem.slice(0, -1);
    return stem;
  }
  if (/s$/.test(lower) && !/ss$/.test(lower) && lower.length > 3) {
    return lower.slice(0, -1);
  }
  return lower;
}
