"""Entity/concept ranking that seeds supernode growth.

Two frequency lists are merged: occurrences of a headword inside NER-tagged
argument phrases, and occurrences as argument headword regardless of tagging.
A named entity therefore counts in both lists and outranks an untagged
concept of equal headword frequency.
"""
from __future__ import annotations

import string
from collections import Counter
from dataclasses import dataclass

from .interchange import ExtractionTuple

_STRIP = string.punctuation + string.whitespace


@dataclass(frozen=True)
class RankedEntity:
    term: str
    ner_count: int
    headword_count: int
    combined_score: int
    rank: int


def normalize_term(head: str) -> str:
    """Producers lemmatize; the core only lowercases and strips edge punctuation."""
    return head.lower().strip(_STRIP)


def rank_entities(tuples: list[ExtractionTuple], min_frequency: int = 5) -> list[RankedEntity]:
    ner_counts: Counter[str] = Counter()
    head_counts: Counter[str] = Counter()
    for t in tuples:
        for arg in (t.arg1, t.arg2):
            term = normalize_term(arg.head)
            if not term:
                continue
            head_counts[term] += 1
            if arg.ner_type is not None:
                ner_counts[term] += 1
    entities = []
    for term, hc in head_counts.items():
        combined = hc + ner_counts.get(term, 0)
        if combined < min_frequency:
            continue
        entities.append((term, ner_counts.get(term, 0), hc, combined))
    entities.sort(key=lambda e: (-e[3], e[0]))
    return [
        RankedEntity(term=term, ner_count=nc, headword_count=hc,
                     combined_score=combined, rank=i + 1)
        for i, (term, nc, hc, combined) in enumerate(entities)
    ]
