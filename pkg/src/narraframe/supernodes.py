"""Supernode growth: greedy expansion of seed-entity sets into contexts.

A supernode is a small set of co-occurring seed terms plus every argument
phrase whose text contains any seed (word-boundary anchored). Growth follows
a strict recipe over the ranked entity list:

  Step 0: the current list is the full ranking.
  Step I: pop the highest-ranked remaining entity as the first seed; if the
          list is empty, stop.
  Step II: collect all phrases matching any seed in the set.
  Step III: among the original ranking, find the most frequent entity inside
          that phrase set, other than the seeds already chosen here.
  Step IV: if that entity was already consumed by an earlier supernode,
          close this one.
  Step V: otherwise add it as a seed, remove it from the current list, and
          return to Step II, until the seed cap is reached.
  Step VI: emit the supernode and restart at Step I.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from .errors import ConfigError
from .interchange import ExtractionTuple, PhraseRef
from .ranking import RankedEntity

DEFAULT_K_MAX = 6


@dataclass(frozen=True)
class PhraseInventory:
    """Distinct argument phrases and their occurrence counts over tuples."""

    phrases: dict[str, PhraseRef]
    counts: dict[str, int]


@dataclass(frozen=True)
class Supernode:
    id: str
    seeds: tuple[str, ...]
    member_phrases: frozenset[str]
    frequency: int


def collect_phrases(tuples: list[ExtractionTuple]) -> PhraseInventory:
    phrases: dict[str, PhraseRef] = {}
    counts: Counter[str] = Counter()
    for t in tuples:
        for arg in (t.arg1, t.arg2):
            phrases.setdefault(arg.id, arg)
            counts[arg.id] += 1
    return PhraseInventory(phrases=phrases, counts=dict(counts))


def _normalize_text(text: str) -> str:
    return " ".join(text.lower().split())


def seed_matches(seed: str, text: str) -> bool:
    """Whole-word substring: 'pong' matches 'ping pong' but not 'sponge'."""
    pattern = rf"(?<![a-z0-9]){re.escape(seed)}(?![a-z0-9])"
    return re.search(pattern, _normalize_text(text)) is not None


def _match_table(terms: list[str], inventory: PhraseInventory) -> dict[str, set[str]]:
    norm_texts = {pid: _normalize_text(p.text) for pid, p in inventory.phrases.items()}
    table: dict[str, set[str]] = {}
    for term in terms:
        rx = re.compile(rf"(?<![a-z0-9]){re.escape(term)}(?![a-z0-9])")
        table[term] = {pid for pid, text in norm_texts.items() if rx.search(text)}
    return table


def build_supernodes(ranking: list[RankedEntity], inventory: PhraseInventory,
                     k_max: int = DEFAULT_K_MAX) -> list[Supernode]:
    if k_max < 1:
        raise ConfigError("k_max must be >= 1")
    original = [e.term for e in ranking]
    original_index = {term: i for i, term in enumerate(original)}
    matches = _match_table(original, inventory)
    current = list(original)
    out: list[Supernode] = []
    while current:
        seeds = [current.pop(0)]
        while len(seeds) < k_max:
            members = set().union(*(matches[s] for s in seeds))
            cooc: Counter[str] = Counter()
            for term in original:
                if term in seeds:
                    continue
                freq = sum(inventory.counts[pid] for pid in matches[term] & members)
                if freq:
                    cooc[term] = freq
            if not cooc:
                break
            best = max(cooc, key=lambda t: (cooc[t], -original_index[t]))
            if best not in current:
                break
            seeds.append(best)
            current.remove(best)
        members = frozenset().union(*(matches[s] for s in seeds))
        out.append(Supernode(
            id=seeds[0],
            seeds=tuple(seeds),
            member_phrases=members,
            frequency=sum(inventory.counts[pid] for pid in members),
        ))
    return out


def assign_phrase(phrase: PhraseRef, supernodes: list[Supernode]) -> list[str]:
    """Ids of every supernode whose seeds match the phrase; two or more
    means the phrase is multi-context."""
    text = _normalize_text(phrase.text)
    out = []
    for sn in supernodes:
        if any(seed_matches(seed, text) for seed in sn.seeds):
            out.append(sn.id)
    return out
