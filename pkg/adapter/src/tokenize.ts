/**
 * Sentence splitting and tokenization.
 *
 * Both are rule-based. The tokenizer keeps internal hyphens and apostrophes
 * inside a word token ("e-mails", "Clinton's") so later normalization can
 * decide what to do with them; punctuation becomes its own token.
 */

const ABBREVIATIONS = new Set([
  'mr', 'mrs', 'ms', 'dr', 'prof', 'sen', 'rep', 'gov', 'gen', 'st',
  'jr', 'sr', 'vs', 'etc', 'inc', 'corp', 'co', 'u.s', 'e.g', 'i.e',
]);

/** Split text into sentences. Terminators are . ! ? outside abbreviations. */
export function splitSentences(text: string): string[] {
  const out: string[] = [];
  let current = '';
  const flush = () => {
    const trimmed = current.trim();
    if (trimmed.length > 0) out.push(trimmed);
    current = '';
  };
  for (let i = 0; i < text.length; i++) {
    const ch = text[i];
    current += ch;
    if (ch === '!' || ch === '?') {
      flush();
      continue;
    }
    if (ch === '.') {
      const before = current.slice(0, -1);
      const lastWord = (before.match(/[A-Za-z.]+$/) ?? [''])[0].toLowerCase();
      if (ABBREVIATIONS.has(lastWord.replace(/\.$/, ''))) continue;
      if (lastWord.length === 1) continue; // single initial, "John F."
      const rest = text.slice(i + 1);
      if (/^\d/.test(rest)) continue; // decimal number
      flush();
    }
  }
  flush();
  return out;
}

/**
 * Tokenize one sentence. A word may contain internal hyphens and
 * apostrophes; everything else that is not whitespace is a one-character
 * punctuation token.
 */
export function tokenize(sentence: string): string[] {
  const tokens: string[] = [];
  const re = /[A-Za-z0-9]+(?:['’-][A-Za-z0-9]+)*|[^\sA-Za-z0-9]/g;
  let m: RegExpExecArray | null;
  while ((m = re.exec(sentence)) !== null) {
    tokens.push(m[0]);
  }
  return tokens;
}
