"""Relationship-tuple interchange: schema, de-noising admission, hyperedge decomposition.

The interchange file is UTF-8, one JSON record per line. The first non-blank
line is a header object carrying schema_version; every later line is one
tuple record. Field names are documented in docs/interchange_schema.md.
Embeddings travel in a separate sidecar file keyed by phrase id (see the
embedding module).
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path

from .errors import DataError, SchemaVersionError

SCHEMA_VERSION = "1"


def read_text_checked(path, what: str) -> str:
    """UTF-8 file read that reports missing/unreadable files as data errors."""
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read {what} {path}: {exc}") from exc

# Candidate actants are limited to a fixed inventory of phrase types.
# Unknown producer tags collapse to "misc" rather than failing the record.
NER_TYPES = (
    "person",
    "organization",
    "location",
    "event",
    "product",
    "work-of-art",
    "law",
    "misc",
)

PATTERNS = ("SVO", "SVP", "SRL-A0VA1", "SRL-A0VA2", "other")


@dataclass(frozen=True)
class PhraseRef:
    """One argument phrase; id is the corpus-wide key embeddings hang off."""

    id: str
    text: str
    head: str
    ner_type: str | None = None
    resolved_from_pronoun: bool = False


@dataclass(frozen=True)
class ExtractionTuple:
    """One (arg1, rel, arg2) relationship instance with provenance."""

    arg1: PhraseRef
    rel_text: str
    rel_verbs: tuple[str, ...]
    arg2: PhraseRef
    pattern: str
    doc_id: str
    post_id: str
    sentence_id: int
    token_span: tuple[int, int]
    timestamp: str | None = None
    # Sentence length in tokens, when the producer knows it. The long-sentence
    # admission rule needs it; absent, the span end is a usable lower bound.
    sentence_tokens: int | None = None

    @property
    def is_self_loop(self) -> bool:
        return self.arg1.id == self.arg2.id


@dataclass(frozen=True)
class IngestConfig:
    max_sentence_tokens: int = 60
    max_arg_gap: int = 25
    max_resolved_phrase_tokens: int = 8


@dataclass(frozen=True)
class CorpusStats:
    """Corpus-wide counts consumed by significance scoring."""

    n_docs: int = 0
    n_sentences: int = 0
    n_tuples: int = 0
    verb_totals: dict[str, int] = field(default_factory=dict)
    verb_grand_total: int = 0


@dataclass(frozen=True)
class Admission:
    accepted: bool
    reason: str | None = None


@dataclass
class LoadResult:
    """Admitted tuples plus stats and a reject report, in file order."""

    tuples: list[ExtractionTuple]
    stats: CorpusStats
    record_errors: list[tuple[int, str]] = field(default_factory=list)
    filtered: list[tuple[int, str]] = field(default_factory=list)
    n_duplicates: int = 0


def _parse_phrase(obj, key: str) -> PhraseRef:
    if not isinstance(obj, dict):
        raise DataError(f"{key}: expected an object")
    pid = obj.get("id")
    text = obj.get("text")
    head = obj.get("head")
    if not isinstance(pid, str) or not pid:
        raise DataError(f"{key}.id: missing or empty")
    if not isinstance(text, str) or not text.strip():
        raise DataError(f"{key}.text: missing or empty")
    if not isinstance(head, str) or not head.strip():
        raise DataError(f"{key}.head: missing or empty")
    ner = obj.get("ner_type")
    if ner is not None:
        if not isinstance(ner, str):
            raise DataError(f"{key}.ner_type: expected string or null")
        if ner not in NER_TYPES:
            ner = "misc"
    resolved = obj.get("resolved_from_pronoun", False)
    if not isinstance(resolved, bool):
        raise DataError(f"{key}.resolved_from_pronoun: expected boolean")
    return PhraseRef(id=pid, text=text, head=head.lower(), ner_type=ner,
                     resolved_from_pronoun=resolved)


def parse_record(obj) -> ExtractionTuple:
    """Validate one interchange record; raises DataError on any violation."""
    if not isinstance(obj, dict):
        raise DataError("record is not an object")
    arg1 = _parse_phrase(obj.get("arg1"), "arg1")
    arg2 = _parse_phrase(obj.get("arg2"), "arg2")
    rel_text = obj.get("rel_text")
    if not isinstance(rel_text, str):
        raise DataError("rel_text: missing")
    verbs = obj.get("rel_verbs")
    if not isinstance(verbs, list) or any(not isinstance(v, str) or not v for v in verbs):
        raise DataError("rel_verbs: expected list of non-empty strings")
    pattern = obj.get("pattern")
    if pattern not in PATTERNS:
        raise DataError(f"pattern: expected one of {PATTERNS}")
    if not verbs and pattern != "other":
        raise DataError("rel_verbs: empty allowed only for pattern 'other'")
    doc_id = obj.get("doc_id")
    post_id = obj.get("post_id")
    if not isinstance(doc_id, str) or not doc_id:
        raise DataError("doc_id: missing or empty")
    if not isinstance(post_id, str) or not post_id:
        raise DataError("post_id: missing or empty")
    sentence_id = obj.get("sentence_id")
    if not isinstance(sentence_id, int) or isinstance(sentence_id, bool) or sentence_id < 0:
        raise DataError("sentence_id: expected integer >= 0")
    span = obj.get("token_span")
    if (not isinstance(span, (list, tuple)) or len(span) != 2
            or any(not isinstance(x, int) or isinstance(x, bool) for x in span)):
        raise DataError("token_span: expected [start, end] integers")
    start, end = span
    if start < 0 or start > end:
        raise DataError("token_span: need 0 <= start <= end")
    ts = obj.get("timestamp")
    if ts is not None:
        if not isinstance(ts, str):
            raise DataError("timestamp: expected ISO date string or null")
        try:
            date.fromisoformat(ts)
        except ValueError as exc:
            raise DataError(f"timestamp: {exc}") from exc
    sent_tokens = obj.get("sentence_tokens")
    if sent_tokens is not None and (not isinstance(sent_tokens, int)
                                    or isinstance(sent_tokens, bool) or sent_tokens < 0):
        raise DataError("sentence_tokens: expected integer >= 0 or null")
    return ExtractionTuple(
        arg1=arg1,
        rel_text=rel_text,
        rel_verbs=tuple(verbs),
        arg2=arg2,
        pattern=pattern,
        doc_id=doc_id,
        post_id=post_id,
        sentence_id=sentence_id,
        token_span=(start, end),
        timestamp=ts,
        sentence_tokens=sent_tokens,
    )


def tuple_to_record(t: ExtractionTuple) -> dict:
    def phrase(p: PhraseRef) -> dict:
        return {
            "id": p.id,
            "text": p.text,
            "head": p.head,
            "ner_type": p.ner_type,
            "resolved_from_pronoun": p.resolved_from_pronoun,
        }

    rec = {
        "arg1": phrase(t.arg1),
        "rel_text": t.rel_text,
        "rel_verbs": list(t.rel_verbs),
        "arg2": phrase(t.arg2),
        "pattern": t.pattern,
        "doc_id": t.doc_id,
        "post_id": t.post_id,
        "sentence_id": t.sentence_id,
        "token_span": list(t.token_span),
        "timestamp": t.timestamp,
        "sentence_tokens": t.sentence_tokens,
    }
    return rec


def admit_tuple(t: ExtractionTuple, config: IngestConfig) -> Admission:
    """De-noising rules; total function, never raises.

    Long-sentence rule: reject when the sentence is long AND the arguments
    are far apart (both thresholds must be exceeded). The argument gap is
    measured as the token width of the full match span, an upper bound on
    the arg1-to-arg2 distance.
    Resolution rule: reject when either argument is a pronoun-resolution
    substitute longer than max_resolved_phrase_tokens.
    """
    start, end = t.token_span
    gap = end - start
    sentence_len = t.sentence_tokens if t.sentence_tokens is not None else end + 1
    if sentence_len > config.max_sentence_tokens and gap > config.max_arg_gap:
        return Admission(False, "long-sentence")
    for arg in (t.arg1, t.arg2):
        if arg.resolved_from_pronoun and len(arg.text.split()) > config.max_resolved_phrase_tokens:
            return Admission(False, "pronoun-resolution")
    return Admission(True, None)


def compute_stats(tuples: list[ExtractionTuple]) -> CorpusStats:
    """Counts over admitted tuples. Verbs are counted as provided
    (producer lemmas, unstemmed); significance stems at scoring time."""
    verb_totals: Counter[str] = Counter()
    docs = set()
    sentences = set()
    for t in tuples:
        docs.add(t.doc_id)
        sentences.add((t.doc_id, t.sentence_id))
        verb_totals.update(t.rel_verbs)
    return CorpusStats(
        n_docs=len(docs),
        n_sentences=len(sentences),
        n_tuples=len(tuples),
        verb_totals=dict(sorted(verb_totals.items())),
        verb_grand_total=sum(verb_totals.values()),
    )


def load_corpus(path, config: IngestConfig | None = None) -> LoadResult:
    """Read an interchange file; admit, de-duplicate, count.

    Malformed lines are collected as record errors and skipped; a header
    with the wrong schema_version is fatal. Output order follows file order.
    """
    config = config or IngestConfig()
    lines = read_text_checked(path, "corpus").splitlines()
    result = LoadResult(tuples=[], stats=CorpusStats())
    header_seen = False
    phrase_texts: dict[str, tuple[str, str]] = {}
    seen: set[ExtractionTuple] = set()
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            if not header_seen:
                raise SchemaVersionError(f"line {lineno}: header is not valid JSON") from exc
            result.record_errors.append((lineno, f"invalid JSON: {exc.msg}"))
            continue
        if not header_seen:
            if not isinstance(obj, dict) or "schema_version" not in obj:
                raise SchemaVersionError("first record must be a header with schema_version")
            if obj["schema_version"] != SCHEMA_VERSION:
                raise SchemaVersionError(
                    f"schema_version {obj['schema_version']!r} unsupported (want {SCHEMA_VERSION!r})")
            header_seen = True
            continue
        try:
            t = parse_record(obj)
            for p in (t.arg1, t.arg2):
                known = phrase_texts.get(p.id)
                if known is None:
                    phrase_texts[p.id] = (p.text, p.head)
                elif known != (p.text, p.head):
                    raise DataError(f"phrase id {p.id!r} reused with different text")
        except DataError as exc:
            result.record_errors.append((lineno, str(exc)))
            continue
        verdict = admit_tuple(t, config)
        if not verdict.accepted:
            result.filtered.append((lineno, verdict.reason))
            continue
        if t in seen:
            result.n_duplicates += 1
            continue
        seen.add(t)
        result.tuples.append(t)
    result.stats = compute_stats(result.tuples)
    return result


def dump_corpus(tuples: list[ExtractionTuple], path) -> None:
    """Serialize tuples back to the interchange format (round-trip safe)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps({"schema_version": SCHEMA_VERSION}, sort_keys=True) + "\n")
        for t in tuples:
            fh.write(json.dumps(tuple_to_record(t), sort_keys=True) + "\n")


@dataclass(frozen=True)
class Provenance:
    """Shared source coordinates for tuples decomposed from one predicate."""

    doc_id: str
    post_id: str
    sentence_id: int
    token_span: tuple[int, int]
    timestamp: str | None = None
    sentence_tokens: int | None = None


def _pair_pattern(role_a: str, role_b: str) -> str:
    if (role_a, role_b) == ("A0", "A1"):
        return "SRL-A0VA1"
    if (role_a, role_b) == ("A0", "A2"):
        return "SRL-A0VA2"
    return "other"


def hyperedge_decompose(args: list[tuple[str, PhraseRef]], rel: str,
                        prov: Provenance) -> list[ExtractionTuple]:
    """Split one n-ary predicate (n >= 3 role slots) into n(n-1)/2 coupled
    pairwise tuples sharing provenance. Each pair's relation label is derived
    from the predicate and the role pair; degenerate pairs (same phrase in
    both slots) are kept and visible via is_self_loop.
    """
    if len(args) < 3:
        raise DataError("hyperedge_decompose needs >= 3 role slots; emit the pair directly")
    if not rel:
        raise DataError("hyperedge_decompose needs a predicate string")
    out = []
    for i in range(len(args)):
        for j in range(i + 1, len(args)):
            role_a, phrase_a = args[i]
            role_b, phrase_b = args[j]
            out.append(ExtractionTuple(
                arg1=phrase_a,
                rel_text=f"{rel}:{role_a}-{role_b}",
                rel_verbs=(rel,),
                arg2=phrase_b,
                pattern=_pair_pattern(role_a, role_b),
                doc_id=prov.doc_id,
                post_id=prov.post_id,
                sentence_id=prov.sentence_id,
                token_span=prov.token_span,
                timestamp=prov.timestamp,
                sentence_tokens=prov.sentence_tokens,
            ))
    return out
