/**
 * Deterministic phrase embeddings.
 *
 * Each token hashes (FNV-1a, 32-bit) to a coordinate and a sign; a phrase
 * vector is the mean of its token vectors, L2-normalized. No model weights
 * and no randomness, so re-runs are byte-identical. Tokens are lowercased
 * and stripped of punctuation first, which makes near-identical surface
 * forms ("Clinton's" / "clinton") collide on purpose.
 */

export const EMBEDDING_DIM = 64;
export const EMBEDDING_PROVIDER = 'fnv1a-token-hash';
export const EMBEDDING_POOLING = 'mean';

export function fnv1a(text: string): number {
  let hash = 0x811c9dc5;
  for (let i = 0; i < text.length; i++) {
    hash ^= text.charCodeAt(i);
    hash = Math.imul(hash, 0x01000193) >>> 0;
  }
  return hash >>> 0;
}

function embedTokens(text: string): string[] {
  return text
    .toLowerCase()
    .split(/[^a-z0-9]+/)
    .filter((t) => t.length > 0);
}

/** Unit-norm vector for a phrase; the zero-token phrase gets basis e0. */
export function embedPhrase(text: string, dim: number = EMBEDDING_DIM): number[] {
  const v = new Array<number>(dim).fill(0);
  const tokens = embedTokens(text);
  if (tokens.length === 0) {
    v[0] = 1;
    return v;
  }
  for (const token of tokens) {
    const h = fnv1a(token);
    const index = h % dim;
    const sign = (h >>> 16) & 1 ? 1 : -1;
    // A second, decorrelated coordinate reduces single-axis collisions.
    const h2 = fnv1a(token + '#');
    v[index] += sign;
    v[h2 % dim] += (h2 >>> 16) & 1 ? 0.5 : -0.5;
  }
  let norm = Math.sqrt(v.reduce((acc, x) => acc + x * x, 0));
  if (norm === 0) {
    v[0] = 1;
    norm = 1;
  }
  return v.map((x) => x / norm);
}
