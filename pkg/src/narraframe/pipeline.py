"""End-to-end runs: configuration, staged execution, artifacts, replay.

A run loads an interchange corpus and drives it through the stages in order:
ingest, rank, supernodes, subnodes, score, network, communities, stats, and
optionally evaluate. Every artifact is written with stable ordering and no
wall-clock content, so re-running the same configuration on the same input
reproduces every output byte for byte; the manifest records content hashes
to make that checkable after the fact.
"""
from __future__ import annotations

import hashlib
import json
from collections import Counter
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path

from .communities import (
    DEFAULT_BASE_SEED,
    DEFAULT_P_TH1,
    DEFAULT_P_TH2,
    DEFAULT_T_MAX,
    CommunityAssignment,
    STATUS_CORE,
    STATUS_DISCARDED,
    STATUS_SHARED,
    consensus_communities,
)
from .embedding import (
    PROVIDER_SIDECAR,
    PROVIDER_TEST,
    EmbeddingStore,
    deterministic_store,
    load_sidecar,
    require_embeddings,
)
from .errors import ConfigError, DataError, InternalInvariantError
from .evaluation import (
    DEFAULT_TAU,
    MATCH_MODES,
    MATCH_STEM,
    MatchReport,
    evaluate,
    load_gold_graph,
    render_report,
)
from .interchange import (SCHEMA_VERSION, IngestConfig, LoadResult,
                          load_corpus, read_text_checked)
from .network import (
    DEFAULT_MIN_EDGE_WEIGHT,
    NarrativeNetwork,
    assemble,
    export_csv,
    export_gexf,
    export_graphml,
    export_json,
    network_stats,
)
from .ranking import RankedEntity, rank_entities
from .significance import (
    DEFAULT_MIN_CONTEXT_COUNT,
    DEFAULT_MIN_CONTEXT_SENTENCES,
    DEFAULT_TOP_M,
    SCORE_FUNCTIONS,
    SCORE_KL,
    ScoredContext,
    actant_membership,
    build_contexts,
    score_contexts,
)
from .subnodes import (
    DEFAULT_ALPHA,
    DEFAULT_K_CLUSTERS,
    DEFAULT_N_LABEL,
    DEFAULT_PRUNE_RATIO,
    DEFAULT_SEED,
    Subnode,
    SubnodeParams,
    build_subnodes,
    corpus_post_frequencies,
)
from .supernodes import DEFAULT_K_MAX, Supernode, build_supernodes, collect_phrases

STAGES = ("ingest", "rank", "supernodes", "subnodes", "score", "network",
          "communities", "stats", "evaluate")

PROVIDERS = (PROVIDER_TEST, PROVIDER_SIDECAR)


@dataclass(frozen=True)
class RunConfig:
    """Every tunable of a run. Defaults reproduce the standard analysis."""

    # ingest admission
    max_sentence_tokens: int = 60
    max_arg_gap: int = 25
    max_resolved_phrase_tokens: int = 8
    # entity ranking
    min_frequency: int = 5
    # supernode growth
    k_max: int = DEFAULT_K_MAX
    # subnode clustering and labeling
    k_clusters: int = DEFAULT_K_CLUSTERS
    prune_ratio: float = DEFAULT_PRUNE_RATIO
    alpha: float = DEFAULT_ALPHA
    n_label: int = DEFAULT_N_LABEL
    seed: int = DEFAULT_SEED
    # relationship significance
    score_fn: str = SCORE_KL
    top_m: int = DEFAULT_TOP_M
    min_context_count: int = DEFAULT_MIN_CONTEXT_COUNT
    min_context_sentences: int = DEFAULT_MIN_CONTEXT_SENTENCES
    # network assembly
    min_edge_weight: int = DEFAULT_MIN_EDGE_WEIGHT
    # community consensus
    t_max: int = DEFAULT_T_MAX
    p_th1: float = DEFAULT_P_TH1
    p_th2: float = DEFAULT_P_TH2
    base_seed: int = DEFAULT_BASE_SEED
    # evaluation
    tau: float = DEFAULT_TAU
    match_mode: str = MATCH_STEM
    eval_freq_threshold: int = 0
    # embeddings
    embedding_provider: str = PROVIDER_TEST
    embedding_dim: int = 64


PRESETS: dict[str, dict[str, object]] = {
    # Large noisy forum corpora: only well-attested entities, default labels.
    "pizzagate": {"min_frequency": 50, "alpha": 0.5, "n_label": 5},
    # Reporting corpora with tight vocabulary: shorter labels, stricter chain.
    "bridgegate": {"min_frequency": 50, "alpha": 0.7, "n_label": 2},
}

_POSITIVE_INT = (
    "max_sentence_tokens", "max_arg_gap", "max_resolved_phrase_tokens",
    "min_frequency", "k_max", "k_clusters", "n_label", "top_m",
    "min_context_count", "min_edge_weight", "t_max", "embedding_dim",
)
_NON_NEGATIVE_INT = ("min_context_sentences", "eval_freq_threshold")


def validate_config(cfg: RunConfig) -> RunConfig:
    for name in _POSITIVE_INT:
        if getattr(cfg, name) < 1:
            raise ConfigError(f"{name} must be >= 1")
    for name in _NON_NEGATIVE_INT:
        if getattr(cfg, name) < 0:
            raise ConfigError(f"{name} must be >= 0")
    if not 0.0 <= cfg.prune_ratio < 1.0:
        raise ConfigError("prune_ratio must lie in [0, 1)")
    if not 0.0 < cfg.alpha < 1.0:
        raise ConfigError("alpha must lie in (0, 1)")
    if not 0.0 < cfg.p_th2 < cfg.p_th1 <= 1.0:
        raise ConfigError("thresholds must satisfy 0 < p_th2 < p_th1 <= 1")
    if not 0.0 < cfg.tau <= 1.0:
        raise ConfigError("tau must lie in (0, 1]")
    if cfg.score_fn not in SCORE_FUNCTIONS:
        raise ConfigError(f"score_fn must be one of {SCORE_FUNCTIONS}")
    if cfg.match_mode not in MATCH_MODES:
        raise ConfigError(f"match_mode must be one of {MATCH_MODES}")
    if cfg.embedding_provider not in PROVIDERS:
        raise ConfigError(f"embedding_provider must be one of {PROVIDERS}")
    return cfg


_FIELD_TYPES = {f.name: f.type for f in fields(RunConfig)}


def _coerce(name: str, raw: str):
    if name not in _FIELD_TYPES:
        known = ", ".join(sorted(_FIELD_TYPES))
        raise ConfigError(f"unknown configuration key {name!r} (known: {known})")
    kind = _FIELD_TYPES[name]
    try:
        if kind == "int":
            return int(raw)
        if kind == "float":
            return float(raw)
        return raw
    except ValueError as exc:
        raise ConfigError(f"{name}: cannot parse {raw!r} as {kind}") from exc


def load_config_file(path) -> dict[str, object]:
    """key = value lines; blank lines and # comments are ignored."""
    out: dict[str, object] = {}
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read configuration file {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key, _, raw = stripped.partition("=")
        out[key.strip()] = _coerce(key.strip(), raw.strip())
    return out


def resolve_config(preset: str | None = None, config_path=None,
                   overrides: list[str] | None = None) -> RunConfig:
    """Defaults, then preset, then config file, then key=value overrides."""
    values: dict[str, object] = {}
    if preset is not None:
        if preset not in PRESETS:
            raise ConfigError(
                f"unknown preset {preset!r} (known: {', '.join(sorted(PRESETS))})")
        values.update(PRESETS[preset])
    if config_path is not None:
        values.update(load_config_file(config_path))
    for item in overrides or []:
        if "=" not in item:
            raise ConfigError(f"override {item!r} must look like key=value")
        key, _, raw = item.partition("=")
        values[key.strip()] = _coerce(key.strip(), raw.strip())
    return validate_config(RunConfig(**values))


# ---------------------------------------------------------------------------
# Staged execution


@dataclass
class PipelineResult:
    config: RunConfig
    until: str
    load: LoadResult | None = None
    ranking: list[RankedEntity] = field(default_factory=list)
    supernodes: list[Supernode] = field(default_factory=list)
    subnodes: list[Subnode] = field(default_factory=list)
    scored: list[ScoredContext] = field(default_factory=list)
    net: NarrativeNetwork | None = None
    assignment: CommunityAssignment | None = None
    store: EmbeddingStore | None = None
    report: MatchReport | None = None


def _stage_index(name: str) -> int:
    if name not in STAGES:
        raise ConfigError(f"unknown stage {name!r} (known: {', '.join(STAGES)})")
    return STAGES.index(name)


def _build_store(cfg: RunConfig, sidecar_path) -> EmbeddingStore:
    if cfg.embedding_provider == PROVIDER_TEST:
        return deterministic_store(cfg.embedding_dim)
    if sidecar_path is None:
        raise ConfigError("embedding_provider sidecar-file requires a sidecar path")
    return load_sidecar(sidecar_path)


def run_pipeline(input_path, cfg: RunConfig, until: str | None = None,
                 gold_path=None, sidecar_path=None) -> PipelineResult:
    """Execute stages in order through `until` (inclusive). The evaluate
    stage needs a reference graph; without one the run stops at stats."""
    validate_config(cfg)
    if until is None:
        until = "evaluate" if gold_path is not None else "stats"
    limit = _stage_index(until)
    if until == "evaluate" and gold_path is None:
        raise ConfigError("the evaluate stage requires a reference graph path")
    result = PipelineResult(config=cfg, until=until)

    result.load = load_corpus(input_path, IngestConfig(
        max_sentence_tokens=cfg.max_sentence_tokens,
        max_arg_gap=cfg.max_arg_gap,
        max_resolved_phrase_tokens=cfg.max_resolved_phrase_tokens))
    if not result.load.tuples:
        raise DataError("no tuples survived admission; nothing to analyze")
    tuples = result.load.tuples
    if limit < _stage_index("rank"):
        return result

    result.ranking = rank_entities(tuples, min_frequency=cfg.min_frequency)
    if limit < _stage_index("supernodes"):
        return result

    inventory = collect_phrases(tuples)
    result.supernodes = build_supernodes(result.ranking, inventory,
                                         k_max=cfg.k_max)
    if limit < _stage_index("subnodes"):
        return result

    result.store = _build_store(cfg, sidecar_path)
    require_embeddings(result.store,
                       [inventory.phrases[pid] for pid in sorted(inventory.phrases)])
    params = SubnodeParams(k_clusters=cfg.k_clusters, prune_ratio=cfg.prune_ratio,
                           alpha=cfg.alpha, n_label=cfg.n_label, seed=cfg.seed)
    result.subnodes = []
    for s in result.supernodes:
        result.subnodes.extend(
            build_subnodes(s, inventory, result.store,
                           corpus_post_frequencies(tuples), params))
    if limit < _stage_index("score"):
        return result

    membership = actant_membership(result.subnodes)
    contexts = build_contexts(tuples, membership)
    result.scored = score_contexts(
        contexts, tuples, result.load.stats, top_m=cfg.top_m,
        min_context_count=cfg.min_context_count,
        min_context_sentences=cfg.min_context_sentences, score_fn=cfg.score_fn)
    if limit < _stage_index("network"):
        return result

    result.net = assemble(result.subnodes, result.supernodes, result.scored,
                          min_edge_weight=cfg.min_edge_weight)
    if limit < _stage_index("communities"):
        return result

    result.assignment = consensus_communities(
        result.net, t_max=cfg.t_max, p_th1=cfg.p_th1, p_th2=cfg.p_th2,
        base_seed=cfg.base_seed)
    if limit < _stage_index("evaluate") or gold_path is None:
        return result

    gold = load_gold_graph(gold_path)
    result.report = evaluate(result.net, gold, result.store,
                             freq_threshold=cfg.eval_freq_threshold,
                             tau=cfg.tau, mode=cfg.match_mode)
    return result


# ---------------------------------------------------------------------------
# Artifact serialization


def ingest_to_obj(load: LoadResult) -> dict:
    return {
        "n_tuples": load.stats.n_tuples,
        "n_docs": load.stats.n_docs,
        "n_sentences": load.stats.n_sentences,
        "n_record_errors": len(load.record_errors),
        "n_duplicates": load.n_duplicates,
        "filtered_by_reason": dict(sorted(Counter(
            reason for _, reason in load.filtered).items())),
    }


def ranking_to_obj(ranking: list[RankedEntity]) -> list[dict]:
    return [{"term": e.term, "ner_count": e.ner_count,
             "headword_count": e.headword_count,
             "combined_score": e.combined_score, "rank": e.rank}
            for e in ranking]


def supernodes_to_obj(supernodes: list[Supernode]) -> list[dict]:
    return [{"id": s.id, "seeds": list(s.seeds), "frequency": s.frequency,
             "members": sorted(s.member_phrases)}
            for s in sorted(supernodes, key=lambda s: s.id)]


def subnodes_to_obj(subnodes: list[Subnode]) -> list[dict]:
    return [{"id": s.id, "parent": s.parent_supernode, "label": list(s.label),
             "frequency": s.frequency, "members": sorted(s.member_phrases)}
            for s in sorted(subnodes, key=lambda s: s.id)]


def contexts_to_obj(scored: list[ScoredContext]) -> list[dict]:
    out = []
    for sc in scored:
        key = sc.context.key
        out.append({
            "src": key.actant_a, "dst": key.actant_b,
            "n_tuples": len(sc.context.tuple_ids),
            "n_sentences": len(key.sentence_ids),
            "verbs": [{"verb": v.verb, "count_in_context": v.count_in_context,
                       "count_in_corpus": v.count_in_corpus, "p_pair": v.p_pair,
                       "p_corpus": v.p_corpus, "kl": v.kl, "score": v.score}
                      for v in sc.verb_scores],
        })
    return sorted(out, key=lambda c: (c["src"], c["dst"]))


def community_tags(assignment: CommunityAssignment) -> dict[str, list[str]]:
    tags: dict[str, list[str]] = {node: [] for node in assignment.matrix.nodes}
    for cid in assignment.communities:
        for node in sorted(assignment.extended[cid]):
            tags[node].append(cid)
    return tags


def communities_to_obj(assignment: CommunityAssignment, cfg: RunConfig) -> dict:
    return {
        "t_max": cfg.t_max, "p_th1": cfg.p_th1, "p_th2": cfg.p_th2,
        "base_seed": cfg.base_seed,
        "communities": [{"id": cid,
                         "core": sorted(assignment.core[cid]),
                         "extended": sorted(assignment.extended[cid])}
                        for cid in assignment.communities],
        "status": dict(sorted(assignment.status.items())),
        "strengths": {node: {cid: val for cid, val in sorted(by.items())}
                      for node, by in sorted(assignment.strengths.items())},
    }


def stats_to_obj(result: PipelineResult) -> dict:
    load = result.load
    obj: dict = {"corpus": {
        "n_docs": load.stats.n_docs,
        "n_sentences": load.stats.n_sentences,
        "n_tuples": load.stats.n_tuples,
    }}
    if result.net is not None:
        ns = network_stats(result.net)
        obj["network"] = {
            "n_supernodes": ns.n_supernodes, "n_subnodes": ns.n_subnodes,
            "n_rel_extractions": ns.n_rel_extractions,
            "n_labeled_rel": ns.n_labeled_rel, "avg_degree": ns.avg_degree,
        }
    if result.assignment is not None:
        status = result.assignment.status
        obj["communities"] = {
            "n_communities": len(result.assignment.communities),
            "n_core": sum(1 for s in status.values() if s == STATUS_CORE),
            "n_shared": sum(1 for s in status.values() if s == STATUS_SHARED),
            "n_discarded": sum(1 for s in status.values() if s == STATUS_DISCARDED),
        }
    return obj


def report_to_obj(report: MatchReport) -> dict:
    a, r = report.actants, report.relationships
    return {
        "actants": {
            "matched_at_threshold": list(a.matched_at_threshold),
            "matched_anywhere": list(a.matched_anywhere),
            "missed": list(a.missed), "n_gold": a.n_gold,
            "n_extra": a.n_extra, "freq_threshold": a.freq_threshold,
            "mapping": dict(sorted(a.mapping.items())),
        },
        "relationships": {
            "recall": r.recall, "n_gold": r.n_gold, "n_matched": r.n_matched,
            "n_endpoint_misses": r.n_endpoint_misses, "mean_cos": r.mean_cos,
            "std_cos": r.std_cos, "tau": r.tau,
            "edges": [{"src": e.src, "dst": e.dst, "rel": e.rel,
                       "candidate": e.candidate, "cos": e.cos,
                       "matched": e.matched, "reason": e.reason}
                      for e in r.edges],
        },
    }


def _write_json(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n",
                    encoding="utf-8")


def file_sha256(path) -> str:
    try:
        return hashlib.sha256(Path(path).read_bytes()).hexdigest()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc}") from exc


def write_artifacts(result: PipelineResult, outdir,
                    input_path, sidecar_path=None, gold_path=None) -> dict:
    """Write one file set per completed stage plus a manifest of content
    hashes. Returns the manifest object (also written to manifest.json)."""
    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    limit = _stage_index(result.until)
    names: list[str] = []

    _write_json(ingest_to_obj(result.load), outdir / "ingest.json")
    names.append("ingest.json")
    if limit >= _stage_index("rank"):
        _write_json(ranking_to_obj(result.ranking), outdir / "ranking.json")
        names.append("ranking.json")
    if limit >= _stage_index("supernodes"):
        _write_json(supernodes_to_obj(result.supernodes), outdir / "supernodes.json")
        names.append("supernodes.json")
    if limit >= _stage_index("subnodes"):
        _write_json(subnodes_to_obj(result.subnodes), outdir / "subnodes.json")
        names.append("subnodes.json")
    if limit >= _stage_index("score"):
        _write_json(contexts_to_obj(result.scored), outdir / "contexts.json")
        names.append("contexts.json")
    if limit >= _stage_index("network"):
        tags = (community_tags(result.assignment)
                if result.assignment is not None else None)
        export_json(result.net, outdir / "network.json", community_tags=tags)
        export_graphml(result.net, outdir / "network.graphml")
        export_gexf(result.net, outdir / "network.gexf")
        export_csv(result.net, outdir / "nodes.csv", outdir / "edges.csv")
        names += ["network.json", "network.graphml", "network.gexf",
                  "nodes.csv", "edges.csv"]
    if limit >= _stage_index("communities") and result.assignment is not None:
        _write_json(communities_to_obj(result.assignment, result.config),
                    outdir / "communities.json")
        names.append("communities.json")
    if limit >= _stage_index("stats"):
        _write_json(stats_to_obj(result), outdir / "stats.json")
        names.append("stats.json")
    if result.report is not None:
        _write_json(report_to_obj(result.report), outdir / "evaluation.json")
        (outdir / "evaluation.txt").write_text(render_report(result.report),
                                               encoding="utf-8")
        names += ["evaluation.json", "evaluation.txt"]

    manifest = {
        "schema_version": SCHEMA_VERSION,
        "config": asdict(result.config),
        "until": result.until,
        "input": {"path": str(Path(input_path).resolve()),
                  "sha256": file_sha256(input_path)},
        "sidecar": ({"path": str(Path(sidecar_path).resolve()),
                     "sha256": file_sha256(sidecar_path)}
                    if sidecar_path is not None else None),
        "gold": ({"path": str(Path(gold_path).resolve()),
                  "sha256": file_sha256(gold_path)}
                 if gold_path is not None else None),
        "artifacts": {name: file_sha256(outdir / name) for name in names},
    }
    _write_json(manifest, outdir / "manifest.json")
    return manifest


def run_and_write(input_path, cfg: RunConfig, outdir, until: str | None = None,
                  gold_path=None, sidecar_path=None) -> dict:
    result = run_pipeline(input_path, cfg, until=until, gold_path=gold_path,
                          sidecar_path=sidecar_path)
    return write_artifacts(result, outdir, input_path,
                           sidecar_path=sidecar_path, gold_path=gold_path)


def replay(manifest_path, outdir) -> dict:
    """Re-run a recorded configuration on its recorded input and verify that
    every artifact reproduces its manifest hash. Changed input is a data
    error; changed output is an internal invariant failure."""
    try:
        manifest = json.loads(read_text_checked(manifest_path, "manifest"))
    except json.JSONDecodeError as exc:
        raise DataError(f"manifest {manifest_path}: invalid JSON: {exc.msg}") from exc
    if not isinstance(manifest, dict) or "config" not in manifest:
        raise DataError(f"manifest {manifest_path}: missing config block")
    if manifest.get("schema_version") != SCHEMA_VERSION:
        raise DataError(f"manifest {manifest_path}: unsupported schema_version")
    try:
        cfg = RunConfig(**manifest["config"])
    except TypeError as exc:
        raise DataError(f"manifest {manifest_path}: bad config block: {exc}") from exc
    validate_config(cfg)

    input_path = manifest["input"]["path"]
    if not Path(input_path).is_file():
        raise DataError(f"recorded input {input_path} no longer exists")
    if file_sha256(input_path) != manifest["input"]["sha256"]:
        raise DataError(f"recorded input {input_path} has changed since the run")
    sidecar = manifest.get("sidecar")
    gold = manifest.get("gold")
    for block, label in ((sidecar, "sidecar"), (gold, "reference graph")):
        if block is not None and file_sha256(block["path"]) != block["sha256"]:
            raise DataError(f"recorded {label} {block['path']} has changed")

    new_manifest = run_and_write(
        input_path, cfg, outdir, until=manifest.get("until"),
        gold_path=gold["path"] if gold else None,
        sidecar_path=sidecar["path"] if sidecar else None)
    mismatched = sorted(
        name for name, digest in manifest["artifacts"].items()
        if new_manifest["artifacts"].get(name) != digest)
    missing = sorted(set(manifest["artifacts"]) - set(new_manifest["artifacts"]))
    if mismatched or missing:
        raise InternalInvariantError(
            "replay did not reproduce the recorded artifacts: "
            f"mismatched={mismatched} missing={missing}")
    return new_manifest
