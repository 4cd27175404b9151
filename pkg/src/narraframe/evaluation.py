"""Evaluation against reference graphs, and synthetic corpus generation.

A reference graph is a small hand-transcribed summary of a narrative: labeled
actants plus directed relationship edges. Evaluation answers two questions:
which reference actants does a recovered network contain, and for each
reference relationship, does some recovered verb phrase between the matched
actants mean the same thing (cosine similarity of phrase embeddings against a
threshold).

The second half of the module plants a known framework (contexts, weighted
actants, per-edge verb distributions) and samples an interchange corpus from
it, so the whole pipeline can be tested closed-loop against ground truth.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .embedding import EmbeddingStore, cosine, embed_text
from .errors import ConfigError, DataError, SchemaVersionError
from .interchange import (NER_TYPES, SCHEMA_VERSION, ExtractionTuple,
                          PhraseRef, read_text_checked)
from .network import NarrativeNetwork
from .stemming import stem_verb

DEFAULT_TAU = 0.85

MATCH_EXACT = "exact"
MATCH_STEM = "stem"
MATCH_SUBSTRING = "substring"
MATCH_MODES = (MATCH_EXACT, MATCH_STEM, MATCH_SUBSTRING)

WEIGHT_TOL = 1e-9


# ---------------------------------------------------------------------------
# Reference graphs


@dataclass(frozen=True)
class GoldEdge:
    src: str
    dst: str
    rel: str


@dataclass(frozen=True)
class GoldGraph:
    """Hand-transcribed reference: unique actant labels, directed edges."""

    nodes: tuple[str, ...]
    edges: tuple[GoldEdge, ...]
    provenance: str = ""


def _validate_gold(nodes, edges, provenance) -> GoldGraph:
    labels = []
    for label in nodes:
        if not isinstance(label, str) or not label.strip():
            raise DataError("reference node label must be a non-empty string")
        labels.append(label.strip().lower())
    if len(set(labels)) != len(labels):
        dupes = sorted({l for l in labels if labels.count(l) > 1})
        raise DataError(f"duplicate reference node labels: {dupes}")
    known = set(labels)
    out_edges = []
    for e in edges:
        if e.src not in known or e.dst not in known:
            raise DataError(f"reference edge {e.src!r} -> {e.dst!r} names an unknown node")
        if not e.rel.strip():
            raise DataError(f"reference edge {e.src!r} -> {e.dst!r} has an empty relationship")
        out_edges.append(GoldEdge(src=e.src, dst=e.dst, rel=e.rel.strip().lower()))
    return GoldGraph(nodes=tuple(labels), edges=tuple(out_edges),
                     provenance=provenance)


def make_gold_graph(nodes, edges, provenance: str = "") -> GoldGraph:
    """Build a validated reference graph from plain labels and (src, dst, rel)
    triples. Labels normalize to lowercase; duplicates and unknown endpoints
    are data errors."""
    gold_edges = [e if isinstance(e, GoldEdge) else GoldEdge(*e) for e in edges]
    normalized = [GoldEdge(src=e.src.strip().lower(), dst=e.dst.strip().lower(),
                           rel=e.rel) for e in gold_edges]
    return _validate_gold(list(nodes), normalized, provenance)


def load_gold_graph(path) -> GoldGraph:
    try:
        obj = json.loads(read_text_checked(path, "reference graph"))
    except json.JSONDecodeError as exc:
        raise DataError(f"reference graph {path}: invalid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise DataError(f"reference graph {path}: expected a JSON object")
    if obj.get("schema_version") != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"reference graph schema_version {obj.get('schema_version')!r} unsupported")
    nodes_raw = obj.get("nodes")
    edges_raw = obj.get("edges", [])
    if not isinstance(nodes_raw, list) or not nodes_raw:
        raise DataError(f"reference graph {path}: 'nodes' must be a non-empty list")
    if not isinstance(edges_raw, list):
        raise DataError(f"reference graph {path}: 'edges' must be a list")
    nodes = []
    for n in nodes_raw:
        if not isinstance(n, dict) or not isinstance(n.get("label"), str):
            raise DataError(f"reference graph {path}: each node needs a string 'label'")
        nodes.append(n["label"])
    edges = []
    for e in edges_raw:
        if not isinstance(e, dict):
            raise DataError(f"reference graph {path}: each edge must be an object")
        src, dst, rel = e.get("src"), e.get("dst"), e.get("rel")
        if not all(isinstance(x, str) for x in (src, dst, rel)):
            raise DataError(f"reference graph {path}: edges need string src/dst/rel")
        edges.append(GoldEdge(src=src.strip().lower(), dst=dst.strip().lower(), rel=rel))
    provenance = obj.get("provenance", "")
    if not isinstance(provenance, str):
        raise DataError(f"reference graph {path}: 'provenance' must be a string")
    return _validate_gold(nodes, edges, provenance)


def dump_gold_graph(gold: GoldGraph, path) -> None:
    obj = {
        "schema_version": SCHEMA_VERSION,
        "provenance": gold.provenance,
        "nodes": [{"label": label} for label in gold.nodes],
        "edges": [{"src": e.src, "dst": e.dst, "rel": e.rel} for e in gold.edges],
    }
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


# ---------------------------------------------------------------------------
# Actant matching


@dataclass(frozen=True)
class ActantReport:
    matched_at_threshold: tuple[str, ...]
    matched_anywhere: tuple[str, ...]
    missed: tuple[str, ...]
    n_gold: int
    n_extra: int
    freq_threshold: int
    # reference label -> the matching supernode used for relationship lookup
    mapping: dict[str, str]


def _words_match(gold_word: str, cand_word: str, mode: str) -> bool:
    if mode == MATCH_EXACT:
        return gold_word == cand_word
    if mode == MATCH_STEM:
        return stem_verb(gold_word) == stem_verb(cand_word)
    return bool(gold_word) and bool(cand_word) and (
        gold_word in cand_word or cand_word in gold_word)


def _supernode_vocab(net: NarrativeNetwork) -> dict[str, set[str]]:
    """Matchable words per supernode: its seed terms plus every label word of
    its subnodes."""
    by_id = {s.id: set(s.seeds) for s in net.supernodes}
    for sub in net.subnodes:
        by_id[sub.parent_supernode].update(sub.label)
    return by_id


def match_actants(net: NarrativeNetwork, gold: GoldGraph,
                  freq_threshold: int = 0,
                  mode: str = MATCH_STEM) -> ActantReport:
    """Match reference actants against recovered supernodes.

    A supernode matches a reference label when every word of the label is
    matched (per mode) by some seed or subnode-label word of that supernode.
    Results are reported twice: restricted to supernodes whose aggregate
    frequency reaches freq_threshold, and unrestricted. Supernodes matching
    no reference label are counted as extras. When several supernodes match
    a label, the most frequent (then lexicographically first) one is kept
    for relationship matching.
    """
    if mode not in MATCH_MODES:
        raise ConfigError(f"match mode must be one of {MATCH_MODES}")
    if freq_threshold < 0:
        raise ConfigError("freq_threshold must be >= 0")
    vocab = _supernode_vocab(net)
    freq = {s.id: s.frequency for s in net.supernodes}
    matched_any: list[str] = []
    matched_thr: list[str] = []
    missed: list[str] = []
    mapping: dict[str, str] = {}
    used: set[str] = set()
    for label in gold.nodes:
        words = label.split()
        hits = [sid for sid, vset in vocab.items()
                if all(any(_words_match(w, c, mode) for c in vset) for w in words)]
        if not hits:
            missed.append(label)
            continue
        matched_any.append(label)
        used.update(hits)
        if any(freq[sid] >= freq_threshold for sid in hits):
            matched_thr.append(label)
        mapping[label] = min(hits, key=lambda sid: (-freq[sid], sid))
    n_extra = sum(1 for sid in vocab if sid not in used)
    return ActantReport(matched_at_threshold=tuple(sorted(matched_thr)),
                        matched_anywhere=tuple(sorted(matched_any)),
                        missed=tuple(sorted(missed)),
                        n_gold=len(gold.nodes), n_extra=n_extra,
                        freq_threshold=freq_threshold, mapping=dict(mapping))


# ---------------------------------------------------------------------------
# Relationship matching


REASON_MATCHED = "matched"
REASON_BELOW_THRESHOLD = "below-threshold"
REASON_NO_CANDIDATES = "no-candidates"
REASON_ENDPOINT_MISSING = "endpoint-missing"


@dataclass(frozen=True)
class EdgeMatch:
    src: str
    dst: str
    rel: str
    candidate: str | None
    cos: float | None
    matched: bool
    reason: str


@dataclass(frozen=True)
class RelationshipReport:
    recall: float
    n_gold: int
    n_matched: int
    n_endpoint_misses: int
    mean_cos: float
    std_cos: float
    tau: float
    edges: tuple[EdgeMatch, ...]


def _edge_candidates(net: NarrativeNetwork, src_super: str,
                     dst_super: str) -> list[str]:
    src_subs = set(net.supernode_children.get(src_super, ()))
    dst_subs = set(net.supernode_children.get(dst_super, ()))
    verbs: set[str] = set()
    for e in net.edges:
        if e.src in src_subs and e.dst in dst_subs:
            verbs.update(vs.verb for vs in e.verbs)
    return sorted(verbs)


def match_relationships(net: NarrativeNetwork, gold: GoldGraph,
                        store: EmbeddingStore, tau: float = DEFAULT_TAU,
                        mode: str = MATCH_STEM) -> RelationshipReport:
    """Match reference relationship edges against recovered verb phrases.

    For each reference edge whose endpoints both matched an actant, the
    candidates are every verb phrase labeling a recovered edge between those
    two supernodes in the reference direction. The closest candidate by
    embedding cosine wins (ties break to the lexicographically first), and
    the edge counts as matched when that cosine reaches tau. Recall divides
    by all reference edges, so endpoint misses lower it; they are also
    reported separately. Mean and standard deviation (population) cover the
    matched pairs only, 0.0 when nothing matched.
    """
    if not 0.0 < tau <= 1.0:
        raise ConfigError("tau must lie in (0, 1]")
    mapping = match_actants(net, gold, freq_threshold=0, mode=mode).mapping
    results: list[EdgeMatch] = []
    cosines: list[float] = []
    n_endpoint = 0
    for e in gold.edges:
        if e.src not in mapping or e.dst not in mapping:
            n_endpoint += 1
            results.append(EdgeMatch(src=e.src, dst=e.dst, rel=e.rel,
                                     candidate=None, cos=None, matched=False,
                                     reason=REASON_ENDPOINT_MISSING))
            continue
        candidates = _edge_candidates(net, mapping[e.src], mapping[e.dst])
        if not candidates:
            results.append(EdgeMatch(src=e.src, dst=e.dst, rel=e.rel,
                                     candidate=None, cos=None, matched=False,
                                     reason=REASON_NO_CANDIDATES))
            continue
        gold_vec = embed_text(store, e.rel)
        best_cand, best_cos = None, -2.0
        for cand in candidates:
            c = cosine(gold_vec, embed_text(store, cand))
            if c > best_cos:
                best_cand, best_cos = cand, c
        matched = best_cos >= tau
        if matched:
            cosines.append(best_cos)
        results.append(EdgeMatch(src=e.src, dst=e.dst, rel=e.rel,
                                 candidate=best_cand, cos=best_cos,
                                 matched=matched,
                                 reason=REASON_MATCHED if matched
                                 else REASON_BELOW_THRESHOLD))
    n_gold = len(gold.edges)
    n_matched = len(cosines)
    recall = n_matched / n_gold if n_gold else 1.0
    mean_cos = float(np.mean(cosines)) if cosines else 0.0
    std_cos = float(np.std(cosines)) if cosines else 0.0
    return RelationshipReport(recall=recall, n_gold=n_gold, n_matched=n_matched,
                              n_endpoint_misses=n_endpoint, mean_cos=mean_cos,
                              std_cos=std_cos, tau=tau, edges=tuple(results))


@dataclass(frozen=True)
class MatchReport:
    actants: ActantReport
    relationships: RelationshipReport


def evaluate(net: NarrativeNetwork, gold: GoldGraph, store: EmbeddingStore,
             freq_threshold: int = 0, tau: float = DEFAULT_TAU,
             mode: str = MATCH_STEM) -> MatchReport:
    return MatchReport(
        actants=match_actants(net, gold, freq_threshold=freq_threshold, mode=mode),
        relationships=match_relationships(net, gold, store, tau=tau, mode=mode))


def render_report(report: MatchReport) -> str:
    a, r = report.actants, report.relationships
    lines = [
        "Actant coverage",
        f"  matched (frequency >= {a.freq_threshold}): "
        f"{len(a.matched_at_threshold)}/{a.n_gold}",
        f"  matched (any frequency):     {len(a.matched_anywhere)}/{a.n_gold}",
        f"  missed: {', '.join(a.missed) if a.missed else 'none'}",
        f"  extra discovered actants: {a.n_extra}",
        "Relationship coverage",
        f"  recall: {r.recall:.3f} ({r.n_matched}/{r.n_gold} matched, "
        f"{r.n_endpoint_misses} endpoint misses, tau={r.tau})",
        f"  matched cosine: mean {r.mean_cos:.3f}, std {r.std_cos:.3f}",
    ]
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Planted frameworks and synthetic corpora


@dataclass(frozen=True)
class PlantedActant:
    """A ground-truth actant with its surface lexicon. Every variant keeps
    the name as its head word, so each actant seeds its own supernode."""

    name: str
    variants: tuple[str, ...]
    ner_type: str = "person"


@dataclass(frozen=True)
class PlantedRelationship:
    src: str
    dst: str
    verb_dist: dict[str, float]


@dataclass(frozen=True)
class PlantedContext:
    name: str
    actant_weights: dict[str, float]
    relationships: tuple[PlantedRelationship, ...]


@dataclass(frozen=True)
class PlantedFramework:
    """Generative ground truth. Posts sample a context, then a set of
    distinct actants by weight, then one sentence per planted relationship
    whose endpoints were both drawn."""

    actants: tuple[PlantedActant, ...]
    contexts: tuple[PlantedContext, ...]
    post_length_dist: dict[int, float]
    context_weights: tuple[float, ...] = ()


def _check_dist(values, what: str) -> None:
    if not values:
        raise DataError(f"{what}: empty distribution")
    if any(v < 0 for v in values):
        raise DataError(f"{what}: negative weight")
    total = sum(values)
    if not math.isclose(total, 1.0, rel_tol=0.0, abs_tol=WEIGHT_TOL):
        raise DataError(f"{what}: weights sum to {total!r}, expected 1.0")


def validate_framework(pf: PlantedFramework) -> None:
    if not pf.actants:
        raise DataError("framework has no actants")
    names = [a.name for a in pf.actants]
    if len(set(names)) != len(names):
        raise DataError("duplicate actant names in framework")
    for a in pf.actants:
        if not a.name.strip():
            raise DataError("actant name must be non-empty")
        if not a.variants:
            raise DataError(f"actant {a.name!r} has no surface variants")
        if a.ner_type not in NER_TYPES:
            raise DataError(f"actant {a.name!r}: unknown ner_type {a.ner_type!r} "
                            f"(one of {', '.join(NER_TYPES)})")
    if not pf.contexts:
        raise DataError("framework has no contexts")
    cnames = [c.name for c in pf.contexts]
    if len(set(cnames)) != len(cnames):
        raise DataError("duplicate context names in framework")
    known = set(names)
    for c in pf.contexts:
        if not c.actant_weights:
            raise DataError(f"context {c.name!r} has no actants")
        unknown = sorted(set(c.actant_weights) - known)
        if unknown:
            raise DataError(f"context {c.name!r} weights unknown actants {unknown}")
        _check_dist(list(c.actant_weights.values()),
                    f"context {c.name!r} actant weights")
        if not c.relationships:
            raise DataError(f"context {c.name!r} has no relationships")
        for r in c.relationships:
            if r.src not in c.actant_weights or r.dst not in c.actant_weights:
                raise DataError(
                    f"context {c.name!r}: relationship {r.src!r} -> {r.dst!r} "
                    "names an actant outside the context")
            _check_dist(list(r.verb_dist.values()),
                        f"context {c.name!r} verbs for {r.src!r} -> {r.dst!r}")
            if any(not v.strip() for v in r.verb_dist):
                raise DataError(f"context {c.name!r}: empty verb")
    if pf.context_weights:
        if len(pf.context_weights) != len(pf.contexts):
            raise DataError("context_weights length differs from contexts")
        _check_dist(list(pf.context_weights), "context weights")
    if any(not isinstance(k, int) or k < 1 for k in pf.post_length_dist):
        raise DataError("post lengths must be integers >= 1")
    _check_dist(list(pf.post_length_dist.values()), "post length distribution")


def load_framework(path) -> PlantedFramework:
    """Read a planted framework from its JSON description (see docs)."""
    try:
        obj = json.loads(read_text_checked(path, "framework"))
    except json.JSONDecodeError as exc:
        raise DataError(f"framework {path}: invalid JSON: {exc.msg}") from exc
    if not isinstance(obj, dict):
        raise DataError(f"framework {path}: expected a JSON object")
    if obj.get("schema_version") != SCHEMA_VERSION:
        raise SchemaVersionError(
            f"framework schema_version {obj.get('schema_version')!r} unsupported")
    try:
        actants = tuple(
            PlantedActant(name=a["name"], variants=tuple(a["variants"]),
                          ner_type=a.get("ner_type", "person"))
            for a in obj["actants"])
        contexts = tuple(
            PlantedContext(
                name=c["name"],
                actant_weights={k: float(v) for k, v in c["actant_weights"].items()},
                relationships=tuple(
                    PlantedRelationship(
                        src=r["src"], dst=r["dst"],
                        verb_dist={k: float(v) for k, v in r["verbs"].items()})
                    for r in c["relationships"]))
            for c in obj["contexts"])
        post_length = {int(k): float(v)
                       for k, v in obj["post_length_dist"].items()}
        weights = tuple(float(w) for w in obj.get("context_weights", []))
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"framework {path}: malformed field: {exc}") from exc
    pf = PlantedFramework(actants=actants, contexts=contexts,
                          post_length_dist=post_length, context_weights=weights)
    validate_framework(pf)
    return pf


def dump_framework(pf: PlantedFramework, path) -> None:
    obj = {
        "schema_version": SCHEMA_VERSION,
        "actants": [{"name": a.name, "variants": list(a.variants),
                     "ner_type": a.ner_type} for a in pf.actants],
        "contexts": [{
            "name": c.name,
            "actant_weights": dict(c.actant_weights),
            "relationships": [{"src": r.src, "dst": r.dst,
                               "verbs": dict(r.verb_dist)}
                              for r in c.relationships],
        } for c in pf.contexts],
        "post_length_dist": {str(k): v for k, v in pf.post_length_dist.items()},
        "context_weights": list(pf.context_weights),
    }
    Path(path).write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n",
                          encoding="utf-8")


def relationship_probability(pf: PlantedFramework,
                             context_name: str, src: str, dst: str) -> float:
    """Probability that one random post emits the given planted relationship,
    computed by enumerating post lengths and distinct-actant draws. Exact for
    uniform actant weights; used to decide which plants a recovery run must
    find."""
    ctx_idx = next((i for i, c in enumerate(pf.contexts) if c.name == context_name),
                   None)
    if ctx_idx is None:
        raise DataError(f"unknown context {context_name!r}")
    ctx = pf.contexts[ctx_idx]
    weights = ctx.actant_weights
    if len(set(weights.values())) != 1:
        raise ConfigError("closed-form probability requires uniform actant weights")
    n = len(weights)
    p_ctx = (pf.context_weights[ctx_idx] if pf.context_weights
             else 1.0 / len(pf.contexts))
    p_both = 0.0
    for k, pk in pf.post_length_dist.items():
        kk = min(k, n)
        if kk < 2:
            continue
        # distinct uniform draws: hypergeometric chance the k-subset covers
        # both endpoints
        p_both += pk * (math.comb(n - 2, kk - 2) / math.comb(n, kk))
    return p_ctx * p_both


def generate_synthetic_corpus(pf: PlantedFramework, n_posts: int,
                              seed: int = 0) -> list[ExtractionTuple]:
    """Sample an interchange corpus from a planted framework.

    Each post picks a context (context_weights, uniform when omitted), draws
    a post length k, then k distinct actants by weight, and emits one tuple
    per planted relationship whose endpoints were both drawn, with the verb
    sampled from that relationship's distribution and each endpoint rendered
    as a uniformly chosen lexicon variant. Deterministic for a given seed.
    """
    validate_framework(pf)
    if n_posts < 1:
        raise ConfigError("n_posts must be >= 1")
    rng = np.random.default_rng(seed)
    actants = {a.name: a for a in pf.actants}
    cw = (list(pf.context_weights) if pf.context_weights
          else [1.0 / len(pf.contexts)] * len(pf.contexts))
    lengths = sorted(pf.post_length_dist)
    length_p = [pf.post_length_dist[k] for k in lengths]
    width = max(5, len(str(n_posts - 1)))
    out: list[ExtractionTuple] = []
    for post_idx in range(n_posts):
        post_id = f"post-{post_idx:0{width}d}"
        ctx = pf.contexts[int(rng.choice(len(pf.contexts), p=cw))]
        names = sorted(ctx.actant_weights)
        probs = [ctx.actant_weights[n] for n in names]
        k = min(int(rng.choice(lengths, p=length_p)), len(names))
        drawn = set(rng.choice(names, size=k, replace=False, p=probs))
        sentence_id = 0
        for r in ctx.relationships:
            if r.src not in drawn or r.dst not in drawn:
                continue
            verbs = sorted(r.verb_dist)
            verb = str(rng.choice(verbs, p=[r.verb_dist[v] for v in verbs]))
            a_src = actants[r.src]
            a_dst = actants[r.dst]
            vi = int(rng.integers(len(a_src.variants)))
            vj = int(rng.integers(len(a_dst.variants)))
            arg1 = PhraseRef(id=f"{a_src.name}:v{vi}", text=a_src.variants[vi],
                             head=a_src.name, ner_type=a_src.ner_type)
            arg2 = PhraseRef(id=f"{a_dst.name}:v{vj}", text=a_dst.variants[vj],
                             head=a_dst.name, ner_type=a_dst.ner_type)
            n_tokens = (len(arg1.text.split()) + len(verb.split())
                        + len(arg2.text.split()))
            out.append(ExtractionTuple(
                arg1=arg1, rel_text=verb, rel_verbs=(verb,), arg2=arg2,
                pattern="SVO", doc_id=post_id, post_id=post_id,
                sentence_id=sentence_id, token_span=(0, n_tokens),
                sentence_tokens=n_tokens))
            sentence_id += 1
    return out
