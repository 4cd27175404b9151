"""Configuration resolution, staged runs, artifact writing, and replay."""
from __future__ import annotations

import json

import pytest

from narraframe.errors import (
    ConfigError,
    DataError,
    InternalInvariantError,
    MissingEmbeddingError,
)
from narraframe.evaluation import (
    PlantedActant,
    PlantedContext,
    PlantedFramework,
    PlantedRelationship,
    dump_gold_graph,
    generate_synthetic_corpus,
    make_gold_graph,
)
from narraframe.interchange import SCHEMA_VERSION, dump_corpus
from narraframe.pipeline import (
    PRESETS,
    RunConfig,
    STAGES,
    file_sha256,
    load_config_file,
    replay,
    resolve_config,
    run_and_write,
    run_pipeline,
    validate_config,
    write_artifacts,
)


def small_framework():
    actants = tuple(PlantedActant(n, (n, f"the {n}")) for n in
                    ("wikileaks", "clinton", "podesta"))
    ctx = PlantedContext(
        name="c0",
        actant_weights={a.name: 1 / 3 for a in actants},
        relationships=(
            PlantedRelationship("wikileaks", "clinton", {"leaked": 0.8, "has": 0.2}),
            PlantedRelationship("clinton", "podesta", {"hired": 0.8, "has": 0.2}),
        ))
    return PlantedFramework(actants=actants, contexts=(ctx,),
                            post_length_dist={2: 0.5, 3: 0.5})


@pytest.fixture(scope="module")
def corpus_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("corpus") / "synth.jsonl"
    dump_corpus(generate_synthetic_corpus(small_framework(), 150, seed=4), path)
    return path


@pytest.fixture(scope="module")
def gold_path(tmp_path_factory):
    path = tmp_path_factory.mktemp("gold") / "gold.json"
    gold = make_gold_graph(
        nodes=["wikileaks", "clinton", "podesta"],
        edges=[("wikileaks", "clinton", "leaked"),
               ("clinton", "podesta", "hired")],
        provenance="transcribed from the planted framework")
    dump_gold_graph(gold, path)
    return path


CFG = RunConfig(min_frequency=5)


# ---------------------------------------------------------------------------
# Configuration


def test_defaults_are_valid_and_resolution_is_identity():
    assert resolve_config() == RunConfig()
    validate_config(RunConfig())


def test_presets():
    pizza = resolve_config(preset="pizzagate")
    assert (pizza.min_frequency, pizza.alpha, pizza.n_label) == (50, 0.5, 5)
    bridge = resolve_config(preset="bridgegate")
    assert (bridge.min_frequency, bridge.alpha, bridge.n_label) == (50, 0.7, 2)
    assert set(PRESETS) == {"pizzagate", "bridgegate"}
    with pytest.raises(ConfigError, match="unknown preset"):
        resolve_config(preset="watergate")


def test_config_file_parsing(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(
        "# narrow run\n"
        "\n"
        "min_frequency = 7\n"
        "alpha=0.6   # tighter chain\n"
        "score_fn = tfidf\n")
    values = load_config_file(path)
    assert values == {"min_frequency": 7, "alpha": 0.6, "score_fn": "tfidf"}
    cfg = resolve_config(config_path=path)
    assert (cfg.min_frequency, cfg.alpha, cfg.score_fn) == (7, 0.6, "tfidf")


def test_config_file_errors(tmp_path):
    bad_line = tmp_path / "a.cfg"
    bad_line.write_text("min_frequency\n")
    with pytest.raises(ConfigError, match="a.cfg:1"):
        load_config_file(bad_line)
    unknown = tmp_path / "b.cfg"
    unknown.write_text("frobnicate = 3\n")
    with pytest.raises(ConfigError, match="unknown configuration key"):
        load_config_file(unknown)
    not_int = tmp_path / "c.cfg"
    not_int.write_text("k_max = soon\n")
    with pytest.raises(ConfigError, match="cannot parse"):
        load_config_file(not_int)
    with pytest.raises(ConfigError, match="cannot read"):
        load_config_file(tmp_path / "missing.cfg")


def test_override_precedence(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text("min_frequency = 7\nn_label = 4\n")
    cfg = resolve_config(preset="pizzagate", config_path=path,
                         overrides=["n_label=9"])
    # preset said 50/5, file said 7/4, override wins for n_label only
    assert (cfg.min_frequency, cfg.n_label, cfg.alpha) == (7, 9, 0.5)
    with pytest.raises(ConfigError, match="key=value"):
        resolve_config(overrides=["n_label:9"])


@pytest.mark.parametrize("override", [
    "min_frequency=0", "k_max=0", "t_max=0", "top_m=0", "embedding_dim=0",
    "prune_ratio=1.0", "prune_ratio=-0.1", "alpha=0.0", "alpha=1.0",
    "tau=0.0", "tau=1.5", "p_th1=1.2", "p_th2=0.9",  # p_th2 >= default p_th1
    "score_fn=idf", "match_mode=fuzzy", "embedding_provider=model-hub",
    "eval_freq_threshold=-1",
])
def test_validation_rejects(override):
    with pytest.raises(ConfigError):
        resolve_config(overrides=[override])


def test_cross_field_thresholds():
    cfg = resolve_config(overrides=["p_th1=0.5", "p_th2=0.2"])
    assert (cfg.p_th1, cfg.p_th2) == (0.5, 0.2)
    with pytest.raises(ConfigError, match="p_th2 < p_th1"):
        resolve_config(overrides=["p_th1=0.3", "p_th2=0.3"])


# ---------------------------------------------------------------------------
# Staged runs


def test_stage_gating(corpus_path):
    result = run_pipeline(corpus_path, CFG, until="rank")
    assert result.ranking and result.supernodes == [] and result.net is None
    result = run_pipeline(corpus_path, CFG, until="network")
    assert result.net is not None and result.assignment is None
    with pytest.raises(ConfigError, match="unknown stage"):
        run_pipeline(corpus_path, CFG, until="shipit")


def test_default_stage_depends_on_gold(corpus_path, gold_path):
    bare = run_pipeline(corpus_path, CFG)
    assert bare.until == "stats" and bare.report is None
    assert bare.assignment is not None
    scored = run_pipeline(corpus_path, CFG, gold_path=gold_path)
    assert scored.until == "evaluate"
    assert scored.report is not None
    assert scored.report.relationships.recall == 1.0
    assert scored.report.actants.missed == ()


def test_evaluate_stage_requires_gold(corpus_path):
    with pytest.raises(ConfigError, match="reference graph"):
        run_pipeline(corpus_path, CFG, until="evaluate")


def test_empty_admission_is_a_data_error(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text(json.dumps({"schema_version": SCHEMA_VERSION}) + "\n")
    with pytest.raises(DataError, match="no tuples"):
        run_pipeline(path, CFG)


def test_sidecar_provider_needs_path_only_when_reached(corpus_path):
    cfg = RunConfig(min_frequency=5, embedding_provider="sidecar-file")
    # The store is not built before the subnode stage, so earlier stages run.
    result = run_pipeline(corpus_path, cfg, until="supernodes")
    assert result.supernodes
    with pytest.raises(ConfigError, match="sidecar"):
        run_pipeline(corpus_path, cfg, until="subnodes")


def test_sidecar_with_missing_phrase_ids_fails_loudly(corpus_path, tmp_path):
    sidecar = tmp_path / "embeddings.jsonl"
    rows = [json.dumps({"schema_version": SCHEMA_VERSION, "dim": 4}),
            json.dumps({"phrase_id": "wikileaks:v0", "vector": [1, 0, 0, 0]})]
    sidecar.write_text("\n".join(rows) + "\n")
    cfg = RunConfig(min_frequency=5, embedding_provider="sidecar-file")
    with pytest.raises(MissingEmbeddingError):
        run_pipeline(corpus_path, cfg, until="subnodes", sidecar_path=sidecar)


# ---------------------------------------------------------------------------
# Artifacts and replay


FULL_SET = {"ingest.json", "ranking.json", "supernodes.json", "subnodes.json",
            "contexts.json", "network.json", "network.graphml", "network.gexf",
            "nodes.csv", "edges.csv", "communities.json", "stats.json"}


def test_artifact_set_and_manifest_hashes(corpus_path, tmp_path):
    outdir = tmp_path / "run"
    manifest = run_and_write(corpus_path, CFG, outdir)
    written = {p.name for p in outdir.iterdir()}
    assert written == FULL_SET | {"manifest.json"}
    assert set(manifest["artifacts"]) == FULL_SET
    for name, digest in manifest["artifacts"].items():
        assert file_sha256(outdir / name) == digest
    assert manifest["config"]["min_frequency"] == 5
    assert manifest["input"]["sha256"] == file_sha256(corpus_path)
    on_disk = json.loads((outdir / "manifest.json").read_text())
    assert on_disk == manifest


def test_artifacts_respect_stage_gate(corpus_path, tmp_path):
    outdir = tmp_path / "partial"
    manifest = run_and_write(corpus_path, CFG, outdir, until="rank")
    assert set(manifest["artifacts"]) == {"ingest.json", "ranking.json"}


def test_evaluation_artifacts_written_with_gold(corpus_path, gold_path, tmp_path):
    outdir = tmp_path / "scored"
    manifest = run_and_write(corpus_path, CFG, outdir, gold_path=gold_path)
    assert {"evaluation.json", "evaluation.txt"} <= set(manifest["artifacts"])
    report = json.loads((outdir / "evaluation.json").read_text())
    assert report["relationships"]["recall"] == 1.0
    assert "recall: 1.000" in (outdir / "evaluation.txt").read_text()
    assert manifest["gold"]["sha256"] == file_sha256(gold_path)


def test_network_artifact_carries_community_tags(corpus_path, tmp_path):
    outdir = tmp_path / "tagged"
    run_and_write(corpus_path, CFG, outdir)
    net = json.loads((outdir / "network.json").read_text())
    communities = json.loads((outdir / "communities.json").read_text())
    member_of = {n["id"]: n["communities"] for n in net["nodes"]}
    for community in communities["communities"]:
        for node in community["extended"]:
            assert community["id"] in member_of[node]


def test_runs_are_byte_identical(corpus_path, tmp_path):
    m1 = run_and_write(corpus_path, CFG, tmp_path / "r1")
    m2 = run_and_write(corpus_path, CFG, tmp_path / "r2")
    assert m1["artifacts"] == m2["artifacts"]


def test_replay_verifies_and_reproduces(corpus_path, tmp_path):
    outdir = tmp_path / "orig"
    run_and_write(corpus_path, CFG, outdir)
    new_manifest = replay(outdir / "manifest.json", tmp_path / "again")
    assert new_manifest["artifacts"] == json.loads(
        (outdir / "manifest.json").read_text())["artifacts"]


def test_replay_rejects_changed_input(tmp_path):
    corpus = tmp_path / "c.jsonl"
    dump_corpus(generate_synthetic_corpus(small_framework(), 40, seed=2), corpus)
    outdir = tmp_path / "run"
    run_and_write(corpus, CFG, outdir)
    dump_corpus(generate_synthetic_corpus(small_framework(), 40, seed=3), corpus)
    with pytest.raises(DataError, match="has changed"):
        replay(outdir / "manifest.json", tmp_path / "again")


def test_replay_detects_nonreproduced_artifacts(corpus_path, tmp_path):
    outdir = tmp_path / "run"
    run_and_write(corpus_path, CFG, outdir)
    manifest_path = outdir / "manifest.json"
    manifest = json.loads(manifest_path.read_text())
    manifest["artifacts"]["stats.json"] = "0" * 64
    manifest_path.write_text(json.dumps(manifest, indent=2, sort_keys=True))
    with pytest.raises(InternalInvariantError, match="stats.json"):
        replay(manifest_path, tmp_path / "again")


def test_replay_manifest_errors(tmp_path):
    with pytest.raises(DataError, match="cannot read"):
        replay(tmp_path / "missing.json", tmp_path / "out")
    bad = tmp_path / "bad.json"
    bad.write_text("{broken")
    with pytest.raises(DataError, match="invalid JSON"):
        replay(bad, tmp_path / "out")
    wrong = tmp_path / "wrong.json"
    wrong.write_text(json.dumps({"schema_version": "9", "config": {}}))
    with pytest.raises(DataError, match="schema_version"):
        replay(wrong, tmp_path / "out")


def test_stage_names_are_stable():
    assert STAGES == ("ingest", "rank", "supernodes", "subnodes", "score",
                      "network", "communities", "stats", "evaluate")
