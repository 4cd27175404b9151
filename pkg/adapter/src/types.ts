/**
 * Shared types for the extraction adapter.
 *
 * The output side mirrors the interchange contract consumed downstream:
 * a JSONL file whose first line is a schema header and whose remaining
 * lines are relationship tuples, plus a sidecar JSONL of one embedding
 * per distinct phrase id.
 */

export const SCHEMA_VERSION = '1';

/** One input document. `text` may span many sentences. */
export interface RawDocument {
  doc_id: string;
  post_id: string;
  text: string;
  timestamp?: string | null;
  source?: string | null;
}

/** Part-of-speech classes the light tagger distinguishes. */
export type Tag =
  | 'DET'
  | 'ADJ'
  | 'NOUN'
  | 'PROPER'
  | 'PRON'
  | 'VERB'
  | 'COPULA'
  | 'PARTICIPLE'
  | 'AUX'
  | 'PREP'
  | 'CONJ'
  | 'ADV'
  | 'PUNCT';

export interface Token {
  text: string;
  tag: Tag;
  /** Index within the sentence. */
  index: number;
  /** True when this token came from substituting a pronoun. */
  fromPronoun: boolean;
}

/** A noun phrase located in a sentence. */
export interface NounPhrase {
  /** Token indices, inclusive start, exclusive end. */
  start: number;
  end: number;
  tokens: Token[];
  /** True when the phrase immediately follows a preposition. */
  inPP: boolean;
  proper: boolean;
  fromPronoun: boolean;
}

/** An argument phrase as it appears in an output record. */
export interface PhraseOut {
  id: string;
  text: string;
  head: string;
  ner_type: string | null;
  resolved_from_pronoun: boolean;
}

/** One output relationship tuple, field-compatible with the interchange. */
export interface TupleOut {
  arg1: PhraseOut;
  rel_text: string;
  rel_verbs: string[];
  arg2: PhraseOut;
  pattern: string;
  doc_id: string;
  post_id: string;
  sentence_id: number;
  token_span: [number, number];
  timestamp: string | null;
  sentence_tokens: number;
}

export interface SidecarRow {
  phrase_id: string;
  vector: number[];
}

export interface SkippedSentence {
  doc_id: string;
  sentence_id: number;
  reason: string;
}

/** Run report written next to the outputs. */
export interface ExtractionLog {
  documents: number;
  sentences: number;
  tuples: number;
  duplicates_collapsed: number;
  pattern_counts: Record<string, number>;
  skipped: SkippedSentence[];
}
