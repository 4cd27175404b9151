"""Command-line interface.

One subcommand per pipeline stage plus `analyze` for network measures,
`evaluate` for reference-graph scoring, `synth` for planted-framework corpus
generation, and `run` for a full artifact-producing run with a manifest.
Exit codes: 0 success, 2 configuration error, 3 data error, 4 internal
invariant violation.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .communities import consensus_communities
from .errors import ConfigError, DataError, InternalInvariantError
from .evaluation import generate_synthetic_corpus, load_framework, render_report
from .interchange import dump_corpus, read_text_checked
from .network import (
    MEASURES,
    centrality,
    ego_network,
    export_csv,
    export_gexf,
    export_graphml,
    export_json,
    first_mention_series,
    keystone_decomposition,
    network_to_obj,
    power_network,
)
from .pipeline import (
    PRESETS,
    STAGES,
    communities_to_obj,
    community_tags,
    contexts_to_obj,
    ingest_to_obj,
    ranking_to_obj,
    replay,
    report_to_obj,
    resolve_config,
    run_and_write,
    run_pipeline,
    stats_to_obj,
    subnodes_to_obj,
    supernodes_to_obj,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_INVARIANT = 4


def _emit(obj, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _config_from(args):
    return resolve_config(preset=args.preset, config_path=args.config,
                          overrides=args.set)


def _run_until(args, until: str):
    return run_pipeline(args.input, _config_from(args), until=until,
                        sidecar_path=args.sidecar)


def cmd_ingest(args) -> int:
    result = _run_until(args, "ingest")
    _emit(ingest_to_obj(result.load), args.out)
    return EXIT_OK


def cmd_rank(args) -> int:
    result = _run_until(args, "rank")
    _emit(ranking_to_obj(result.ranking), args.out)
    return EXIT_OK


def cmd_supernodes(args) -> int:
    result = _run_until(args, "supernodes")
    _emit(supernodes_to_obj(result.supernodes), args.out)
    return EXIT_OK


def cmd_subnodes(args) -> int:
    result = _run_until(args, "subnodes")
    _emit(subnodes_to_obj(result.subnodes), args.out)
    return EXIT_OK


def cmd_score(args) -> int:
    result = _run_until(args, "score")
    _emit(contexts_to_obj(result.scored), args.out)
    return EXIT_OK


def cmd_assemble(args) -> int:
    result = _run_until(args, "network")
    if args.out:
        outdir = Path(args.out)
        outdir.mkdir(parents=True, exist_ok=True)
        export_json(result.net, outdir / "network.json")
        export_graphml(result.net, outdir / "network.graphml")
        export_gexf(result.net, outdir / "network.gexf")
        export_csv(result.net, outdir / "nodes.csv", outdir / "edges.csv")
    else:
        _emit(network_to_obj(result.net), None)
    return EXIT_OK


def cmd_communities(args) -> int:
    result = _run_until(args, "communities")
    _emit(communities_to_obj(result.assignment, result.config), args.out)
    return EXIT_OK


def cmd_analyze(args) -> int:
    result = _run_until(args, "network")
    net = result.net
    obj: dict = {}
    if args.measure:
        obj["measure"] = args.measure
        obj["centrality"] = {str(k): v for k, v in centrality(net, args.measure).items()}
    if args.keystone:
        components = keystone_decomposition(net, args.keystone)
        obj["keystone"] = {"supernode": args.keystone,
                           "n_components": len(components),
                           "components": [list(c) for c in components]}
    if args.ego:
        ego = ego_network(net, args.ego, radius=args.radius)
        obj["ego"] = {"center": args.ego, "radius": args.radius,
                      "nodes": [s.id for s in ego.subnodes],
                      "edges": [{"src": e.src, "dst": e.dst, "weight": e.weight}
                                for e in ego.edges]}
    if args.power:
        roster = {line.strip() for line in
                  read_text_checked(args.power, "roster").splitlines()
                  if line.strip()}
        pn = power_network(net, roster)
        obj["power"] = {"roster": sorted(roster),
                        "nodes": [s.id for s in pn.subnodes],
                        "edges": [{"src": e.src, "dst": e.dst, "weight": e.weight,
                                   "top_verb": e.verbs[0].verb if e.verbs else None}
                                  for e in pn.edges]}
    if args.mentions:
        series = first_mention_series(
            result.load.tuples,
            {s.id: s.member_phrases for s in net.supernodes})
        obj["first_mentions"] = {"n_undated": series.n_undated,
                                 "mentions": [{"timestamp": ts, "entity": ent}
                                              for ts, ent in series.mentions]}
    if not obj:
        raise ConfigError("analyze needs at least one of --measure, --keystone, "
                          "--ego, --power, --mentions")
    _emit(obj, args.out)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    cfg = _config_from(args)
    result = run_pipeline(args.input, cfg, until="evaluate",
                          gold_path=args.gold, sidecar_path=args.sidecar)
    if args.json:
        _emit(report_to_obj(result.report), args.out)
    else:
        text = render_report(result.report)
        if args.out:
            Path(args.out).write_text(text, encoding="utf-8")
        else:
            sys.stdout.write(text)
    return EXIT_OK


def cmd_synth(args) -> int:
    pf = load_framework(args.framework)
    tuples = generate_synthetic_corpus(pf, args.posts, seed=args.seed)
    dump_corpus(tuples, args.out)
    sys.stdout.write(f"wrote {len(tuples)} tuples from {args.posts} posts "
                     f"to {args.out}\n")
    return EXIT_OK


def cmd_run(args) -> int:
    if args.replay:
        manifest = replay(args.replay, args.out)
    else:
        if not args.input:
            raise ConfigError("run requires --input (or --replay MANIFEST)")
        cfg = _config_from(args)
        manifest = run_and_write(args.input, cfg, args.out, until=args.until,
                                 gold_path=args.gold, sidecar_path=args.sidecar)
    sys.stdout.write(f"wrote {len(manifest['artifacts'])} artifacts to "
                     f"{args.out}\n")
    return EXIT_OK


def cmd_stats(args) -> int:
    result = _run_until(args, "stats")
    _emit(stats_to_obj(result), args.out)
    return EXIT_OK


def _add_config_flags(sp) -> None:
    sp.add_argument("--config", help="key = value configuration file")
    sp.add_argument("--preset", choices=sorted(PRESETS),
                    help="named parameter bundle applied before the file")
    sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                    help="single configuration override (repeatable)")
    sp.add_argument("--sidecar", help="embedding sidecar file "
                                      "(with embedding_provider=sidecar-file)")


def _add_stage_command(sub, name: str, func, help_text: str):
    sp = sub.add_parser(name, help=help_text)
    sp.add_argument("--input", required=True, help="interchange corpus file")
    sp.add_argument("--out", help="output file (default: stdout)")
    _add_config_flags(sp)
    sp.set_defaults(func=func)
    return sp


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="narraframe",
        description="Reconstruct latent narrative-framework networks from "
                    "syntactic relationship tuples.")
    sub = p.add_subparsers(dest="command", required=True)

    _add_stage_command(sub, "ingest", cmd_ingest,
                       "load and de-noise a corpus, report admission counts")
    _add_stage_command(sub, "rank", cmd_rank, "rank candidate actant entities")
    _add_stage_command(sub, "supernodes", cmd_supernodes,
                       "group ranked entities into actant categories")
    _add_stage_command(sub, "subnodes", cmd_subnodes,
                       "cluster each category into labeled subcategories")
    _add_stage_command(sub, "score", cmd_score,
                       "score contextually significant verbs per actant pair")
    sp = _add_stage_command(sub, "assemble", cmd_assemble,
                            "assemble the network (with --out DIR, all formats)")
    _add_stage_command(sub, "communities", cmd_communities,
                       "consensus community detection over the network")
    _add_stage_command(sub, "stats", cmd_stats, "corpus and network statistics")

    sp = _add_stage_command(sub, "analyze", cmd_analyze,
                            "centrality, keystone removal, ego and power views")
    sp.add_argument("--measure", choices=MEASURES)
    sp.add_argument("--keystone", metavar="SUPERNODE")
    sp.add_argument("--ego", metavar="SUBNODE")
    sp.add_argument("--radius", type=int, default=1)
    sp.add_argument("--power", metavar="ROSTER_FILE",
                    help="file of supernode ids, one per line")
    sp.add_argument("--mentions", action="store_true",
                    help="earliest timestamped mention per actant category")

    sp = _add_stage_command(sub, "evaluate", cmd_evaluate,
                            "score the recovered network against a reference graph")
    sp.add_argument("--gold", required=True, help="reference graph JSON file")
    sp.add_argument("--json", action="store_true",
                    help="emit the full JSON report instead of text")

    sp = sub.add_parser("synth", help="sample a corpus from a planted framework")
    sp.add_argument("--framework", required=True, help="framework JSON file")
    sp.add_argument("--posts", required=True, type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--out", required=True, help="interchange file to write")
    sp.set_defaults(func=cmd_synth)

    sp = sub.add_parser("run", help="full pipeline run writing artifacts "
                                    "and a manifest")
    sp.add_argument("--input", help="interchange corpus file")
    sp.add_argument("--out", required=True, help="artifact directory")
    sp.add_argument("--gold", help="reference graph for the evaluate stage")
    sp.add_argument("--until", choices=STAGES, help="stop after this stage")
    sp.add_argument("--replay", metavar="MANIFEST",
                    help="re-run a recorded manifest and verify artifact hashes")
    _add_config_flags(sp)
    sp.set_defaults(func=cmd_run)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DataError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except InternalInvariantError as exc:
        print(f"internal invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
