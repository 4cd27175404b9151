#!/usr/bin/env node
/**
 * Command line entry point.
 *
 *   adapter <input dir> <output prefix>
 *
 * Reads every *.txt (one document per file, file stem as id) and *.jsonl
 * (one JSON document per line: doc_id, post_id, text, optional timestamp)
 * under the input directory, then writes:
 *
 *   <prefix>.jsonl             extraction tuples, header line first
 *   <prefix>.embeddings.jsonl  one vector per distinct phrase id
 *   <prefix>.log.json          extraction statistics and skipped sentences
 */

import { mkdirSync, readdirSync, readFileSync, writeFileSync } from 'node:fs';
import { basename, dirname, extname, join } from 'node:path';
import { extractCorpus } from './adapter.js';
import {
  EMBEDDING_DIM,
  EMBEDDING_POOLING,
  EMBEDDING_PROVIDER,
} from './embed.js';
import { SCHEMA_VERSION, type RawDocument } from './types.js';

const PRODUCER = 'tuple-extraction-adapter';
const PRODUCER_VERSION = '0.1.0';

function fail(message: string): never {
  process.stderr.write(`adapter: ${message}\n`);
  process.exit(2);
}

function parseJsonlDocs(path: string): RawDocument[] {
  const docs: RawDocument[] = [];
  const lines = readFileSync(path, 'utf8').split('\n');
  for (let i = 0; i < lines.length; i++) {
    const line = lines[i].trim();
    if (!line) continue;
    let obj: unknown;
    try {
      obj = JSON.parse(line);
    } catch {
      fail(`${path}:${i + 1}: invalid JSON`);
    }
    const rec = obj as Record<string, unknown>;
    if (
      typeof rec.doc_id !== 'string' || !rec.doc_id ||
      typeof rec.post_id !== 'string' || !rec.post_id ||
      typeof rec.text !== 'string'
    ) {
      fail(`${path}:${i + 1}: need doc_id, post_id, text strings`);
    }
    docs.push({
      doc_id: rec.doc_id,
      post_id: rec.post_id,
      text: rec.text,
      timestamp: typeof rec.timestamp === 'string' ? rec.timestamp : undefined,
    });
  }
  return docs;
}

export function readDocuments(inputDir: string): RawDocument[] {
  let entries: string[];
  try {
    entries = readdirSync(inputDir);
  } catch {
    fail(`cannot read input directory ${inputDir}`);
  }
  const docs: RawDocument[] = [];
  for (const name of [...entries].sort()) {
    const path = join(inputDir, name);
    const ext = extname(name);
    if (ext === '.txt') {
      const stem = basename(name, ext);
      docs.push({ doc_id: stem, post_id: stem, text: readFileSync(path, 'utf8') });
    } else if (ext === '.jsonl') {
      docs.push(...parseJsonlDocs(path));
    }
  }
  if (docs.length === 0) fail(`no .txt or .jsonl documents in ${inputDir}`);
  return docs;
}

function toJsonl(header: object, rows: object[]): string {
  return [header, ...rows].map((x) => JSON.stringify(x)).join('\n') + '\n';
}

export async function main(argv: string[]): Promise<number> {
  if (argv.length !== 2) {
    process.stderr.write('usage: adapter <input dir> <output prefix>\n');
    return 2;
  }
  const [inputDir, prefix] = argv;
  const docs = readDocuments(inputDir);
  const { tuples, sidecar, log } = await extractCorpus(docs);

  mkdirSync(dirname(prefix) || '.', { recursive: true });
  writeFileSync(
    `${prefix}.jsonl`,
    toJsonl(
      {
        schema_version: SCHEMA_VERSION,
        producer: PRODUCER,
        producer_version: PRODUCER_VERSION,
      },
      tuples,
    ),
  );
  writeFileSync(
    `${prefix}.embeddings.jsonl`,
    toJsonl(
      {
        schema_version: SCHEMA_VERSION,
        dim: EMBEDDING_DIM,
        provider: EMBEDDING_PROVIDER,
        pooling: EMBEDDING_POOLING,
      },
      sidecar,
    ),
  );
  writeFileSync(`${prefix}.log.json`, JSON.stringify(log, null, 2) + '\n');

  process.stdout.write(
    `extracted ${log.tuples} tuples (${sidecar.length} phrases) ` +
    `from ${log.documents} documents into ${prefix}.jsonl\n`,
  );
  return 0;
}

const invokedDirectly = process.argv[1] !== undefined &&
  import.meta.url.endsWith(basename(process.argv[1]));
if (invokedDirectly) {
  main(process.argv.slice(2)).then(
    (code) => process.exit(code),
    (err) => {
      process.stderr.write(`adapter: ${err instanceof Error ? err.message : err}\n`);
      process.exit(1);
    },
  );
}
