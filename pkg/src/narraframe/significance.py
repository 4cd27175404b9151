"""Relationship significance: verbs scored per actant-pair context.

A context is the set of sentences where two actant categories co-occur; its
verbs are those of the tuples connecting the pair (arg1 in the source actant,
arg2 in the destination). A verb is contextually significant when its
in-context frequency dwarfs its corpus-wide frequency; the default score is
the log-ratio ln(p_pair / p_corpus), which sends proportionally-occurring
verbs ("has", "is") to zero. Verbs are stemmed before counting on both sides.
"""
from __future__ import annotations

import math
from collections import Counter, defaultdict
from dataclasses import dataclass

from .errors import ConfigError, InternalInvariantError
from .interchange import CorpusStats, ExtractionTuple
from .stemming import stem_verb
from .subnodes import Subnode

__all__ = [
    "Context", "ContextKey", "ScoredContext", "VerbScore",
    "actant_membership", "build_contexts", "score_context", "score_contexts",
    "stem_verb", "stemmed_corpus_totals",
]

DEFAULT_TOP_M = 3
DEFAULT_MIN_CONTEXT_COUNT = 2
DEFAULT_MIN_CONTEXT_SENTENCES = 1

SCORE_KL = "kl"
SCORE_TFIDF = "tfidf"
SCORE_FUNCTIONS = (SCORE_KL, SCORE_TFIDF)


@dataclass(frozen=True)
class ContextKey:
    actant_a: str
    actant_b: str
    sentence_ids: frozenset[tuple[str, int]]


@dataclass(frozen=True)
class Context:
    """A live actant-pair context plus the tuples that realize it."""

    key: ContextKey
    tuple_ids: tuple[int, ...]


@dataclass(frozen=True)
class VerbScore:
    verb: str
    count_in_context: int
    count_in_corpus: int
    p_pair: float
    p_corpus: float
    kl: float
    score: float


@dataclass(frozen=True)
class ScoredContext:
    context: Context
    verb_scores: tuple[VerbScore, ...]


def actant_membership(subnodes: list[Subnode]) -> dict[str, list[str]]:
    """phrase id -> subnode ids. Within one supernode the subnodes partition
    the phrases; a phrase matching several supernodes appears once per each."""
    members: dict[str, list[str]] = defaultdict(list)
    for sub in subnodes:
        for pid in sorted(sub.member_phrases):
            members[pid].append(sub.id)
    return dict(members)


def build_contexts(tuples: list[ExtractionTuple],
                   membership: dict[str, list[str]]) -> list[Context]:
    """One context per ordered actant pair connected by at least one tuple.
    Self-loops (both args in the same actant) are legitimate contexts."""
    ids: dict[tuple[str, str], list[int]] = defaultdict(list)
    sentences: dict[tuple[str, str], set[tuple[str, int]]] = defaultdict(set)
    for i, t in enumerate(tuples):
        for a in membership.get(t.arg1.id, []):
            for b in membership.get(t.arg2.id, []):
                ids[(a, b)].append(i)
                sentences[(a, b)].add((t.doc_id, t.sentence_id))
    out = []
    for pair in sorted(ids):
        key = ContextKey(actant_a=pair[0], actant_b=pair[1],
                         sentence_ids=frozenset(sentences[pair]))
        out.append(Context(key=key, tuple_ids=tuple(ids[pair])))
    return out


def stemmed_corpus_totals(stats: CorpusStats) -> tuple[dict[str, int], int]:
    totals: Counter[str] = Counter()
    for verb, count in stats.verb_totals.items():
        totals[stem_verb(verb)] += count
    return dict(totals), stats.verb_grand_total


def score_context(ctx: Context, tuples: list[ExtractionTuple], stats: CorpusStats,
                  top_m: int = DEFAULT_TOP_M,
                  min_context_count: int = DEFAULT_MIN_CONTEXT_COUNT,
                  min_context_sentences: int = DEFAULT_MIN_CONTEXT_SENTENCES,
                  score_fn: str = SCORE_KL) -> list[VerbScore]:
    """Ranked verb scores for one context.

    p_pair uses the full in-context verb mass as its denominator; verbs
    repeated fewer than min_context_count times are not reported. Sort is by
    score descending, then context count descending, then verb.
    """
    if score_fn not in SCORE_FUNCTIONS:
        raise ConfigError(f"score_fn must be one of {SCORE_FUNCTIONS}")
    if len(ctx.key.sentence_ids) < min_context_sentences:
        return []
    corpus_totals, grand_total = stemmed_corpus_totals(stats)
    if grand_total <= 0:
        raise InternalInvariantError("corpus has no verb mass to score against")
    context_counts: Counter[str] = Counter()
    for tid in ctx.tuple_ids:
        context_counts.update(stem_verb(v) for v in tuples[tid].rel_verbs)
    n_context = sum(context_counts.values())
    if n_context == 0:
        return []
    scores = []
    for verb, count in context_counts.items():
        corpus_count = corpus_totals.get(verb, 0)
        if count > corpus_count:
            raise InternalInvariantError(
                f"verb {verb!r}: context count {count} exceeds corpus count {corpus_count}")
        if count < min_context_count:
            continue
        p_pair = count / n_context
        p_corpus = corpus_count / grand_total
        kl = math.log(p_pair / p_corpus)
        if score_fn == SCORE_KL:
            score = kl
        else:
            score = p_pair * math.log(grand_total / corpus_count)
        scores.append(VerbScore(verb=verb, count_in_context=count,
                                count_in_corpus=corpus_count, p_pair=p_pair,
                                p_corpus=p_corpus, kl=kl, score=score))
    scores.sort(key=lambda vs: (-vs.score, -vs.count_in_context, vs.verb))
    return scores[:top_m]


def score_contexts(contexts: list[Context], tuples: list[ExtractionTuple],
                   stats: CorpusStats, **kwargs) -> list[ScoredContext]:
    return [ScoredContext(context=ctx,
                          verb_scores=tuple(score_context(ctx, tuples, stats, **kwargs)))
            for ctx in contexts]
