"""Narrative framework graph over subnodes.

Nodes are subnodes grouped under their supernodes; edges are directed
(arg1 side to arg2 side), weighted by co-occurrence count, and labeled with
the ranked significant verbs of their context. Self-loops carry attribute
relations between phrases of the same actant. Analyses (centrality, keystone
removal, ego and power views, first mentions) are read-only; the network is
immutable after assembly.
"""
from __future__ import annotations

import csv
import json
import logging
import re
from collections import defaultdict
from dataclasses import dataclass, field

import networkx as nx

from .errors import ConfigError, DataError, InternalInvariantError
from .interchange import ExtractionTuple
from .significance import Context, ContextKey, ScoredContext, VerbScore, stem_verb
from .subnodes import Subnode
from .supernodes import Supernode

log = logging.getLogger(__name__)

DEFAULT_MIN_EDGE_WEIGHT = 2

PAGERANK_DAMPING = 0.85
PAGERANK_TOL = 1e-9
# Power iteration contracts by the damping factor per step, so 1e-9 needs
# well over networkx's default budget of 100 iterations.
PAGERANK_MAX_ITER = 10000
EIGEN_TOL = 1e-9
EIGEN_MAX_ITER = 10000

MEASURE_EIGEN = "eigen"
MEASURE_PAGERANK = "pagerank"
MEASURE_BETWEENNESS_EDGES = "betweenness-edges"
MEASURES = (MEASURE_EIGEN, MEASURE_PAGERANK, MEASURE_BETWEENNESS_EDGES)

# Professional / personal relation verbs for the power view; matched on stems,
# configurable per call.
DEFAULT_POWER_VERBS = (
    "is", "was", "chair", "manage", "own", "work", "work-for", "appoint",
    "hire", "marry", "head", "lead", "found", "direct", "serve", "advise",
    "employ", "represent", "brother", "sister",
)

GEXF_DATE = "2000-01-01"


@dataclass(frozen=True)
class NetworkEdge:
    src: str
    dst: str
    weight: int
    verbs: tuple[VerbScore, ...]
    tuple_ids: tuple[int, ...]


@dataclass(frozen=True)
class NetworkStats:
    n_supernodes: int
    n_subnodes: int
    n_rel_extractions: int
    n_labeled_rel: int
    avg_degree: int


@dataclass(frozen=True)
class FirstMentionSeries:
    mentions: tuple[tuple[str, str], ...]
    n_undated: int


@dataclass(eq=False)
class NarrativeNetwork:
    subnodes: tuple[Subnode, ...]
    supernodes: tuple[Supernode, ...]
    edges: tuple[NetworkEdge, ...]
    supernode_children: dict[str, tuple[str, ...]]
    graph: nx.DiGraph = field(repr=False)

    @property
    def n_rel_extractions(self) -> int:
        return len({tid for e in self.edges for tid in e.tuple_ids})


def assemble(subnodes: list[Subnode], supernodes: list[Supernode],
             scored: list[ScoredContext],
             min_edge_weight: int = DEFAULT_MIN_EDGE_WEIGHT) -> NarrativeNetwork:
    """Contexts with fewer than min_edge_weight tuples are dropped; surviving
    edges keep their ranked verb list, which may be empty (an extraction whose
    verbs never repeat is real but unlabeled)."""
    subnodes = tuple(sorted(subnodes, key=lambda s: s.id))
    supernodes = tuple(sorted(supernodes, key=lambda s: s.id))
    node_ids = {s.id for s in subnodes}
    super_ids = {s.id for s in supernodes}
    children: dict[str, list[str]] = {sid: [] for sid in sorted(super_ids)}
    for sub in subnodes:
        if sub.parent_supernode not in super_ids:
            raise InternalInvariantError(
                f"subnode {sub.id!r} points at unknown supernode {sub.parent_supernode!r}")
        children[sub.parent_supernode].append(sub.id)

    edges = []
    for sc in scored:
        key = sc.context.key
        weight = len(sc.context.tuple_ids)
        if weight < min_edge_weight:
            continue
        if key.actant_a not in node_ids or key.actant_b not in node_ids:
            raise InternalInvariantError(
                f"context {key.actant_a!r}->{key.actant_b!r} references unknown subnodes")
        edges.append(NetworkEdge(src=key.actant_a, dst=key.actant_b,
                                 weight=weight, verbs=sc.verb_scores,
                                 tuple_ids=sc.context.tuple_ids))
    edges.sort(key=lambda e: (e.src, e.dst))

    graph = nx.DiGraph()
    for sub in subnodes:
        graph.add_node(sub.id, label=" ".join(sub.label),
                       parent=sub.parent_supernode, frequency=sub.frequency)
    for e in edges:
        graph.add_edge(e.src, e.dst, weight=e.weight,
                       verbs="|".join(v.verb for v in e.verbs),
                       top_verb=e.verbs[0].verb if e.verbs else "",
                       top_kl=e.verbs[0].kl if e.verbs else 0.0)
    return NarrativeNetwork(subnodes=subnodes, supernodes=supernodes,
                            edges=tuple(edges),
                            supernode_children={k: tuple(v) for k, v in children.items()},
                            graph=graph)


def undirected_view(net: NarrativeNetwork) -> nx.Graph:
    """Undirected projection with opposite-direction weights summed."""
    g = nx.Graph()
    g.add_nodes_from(net.graph.nodes(data=True))
    for e in net.edges:
        if g.has_edge(e.src, e.dst):
            g[e.src][e.dst]["weight"] += e.weight
        else:
            g.add_edge(e.src, e.dst, weight=e.weight)
    return g


def network_stats(net: NarrativeNetwork) -> NetworkStats:
    """n_rel_extractions counts tuples landing on kept edges; n_labeled_rel
    counts edges carrying at least one significant verb; avg_degree is
    2E/V on the undirected view, rounded to an integer."""
    und = undirected_view(net)
    n_nodes = und.number_of_nodes()
    avg = int(round(2 * und.number_of_edges() / n_nodes)) if n_nodes else 0
    return NetworkStats(n_supernodes=len(net.supernodes),
                        n_subnodes=len(net.subnodes),
                        n_rel_extractions=net.n_rel_extractions,
                        n_labeled_rel=sum(1 for e in net.edges if e.verbs),
                        avg_degree=avg)


def keystone_decomposition(net: NarrativeNetwork, supernode_id: str) -> list[tuple[str, ...]]:
    """Connected components (undirected view) left after deleting every
    subnode of the given supernode, largest first."""
    if supernode_id not in net.supernode_children:
        raise DataError(f"unknown supernode {supernode_id!r}")
    g = undirected_view(net)
    g.remove_nodes_from(net.supernode_children[supernode_id])
    components = [tuple(sorted(c)) for c in nx.connected_components(g)]
    components.sort(key=lambda c: (-len(c), c))
    return components


def centrality(net: NarrativeNetwork, measure: str):
    """Node scores for eigen/pagerank, or undirected-edge scores for
    betweenness-edges. Weights count as mass for the node measures; the edge
    measure is structural because co-occurrence weight is similarity, not
    distance."""
    if measure not in MEASURES:
        raise ConfigError(f"measure must be one of {MEASURES}")
    if not net.subnodes:
        raise DataError("centrality needs a non-empty network")
    und = undirected_view(net)
    if measure == MEASURE_PAGERANK:
        raw = nx.pagerank(und, alpha=PAGERANK_DAMPING, tol=PAGERANK_TOL,
                          max_iter=PAGERANK_MAX_ITER, weight="weight")
        return {node: raw[node] for node in sorted(raw)}
    if measure == MEASURE_EIGEN:
        raw = nx.eigenvector_centrality(und, max_iter=EIGEN_MAX_ITER,
                                        tol=EIGEN_TOL, weight="weight")
        return {node: raw[node] for node in sorted(raw)}
    raw = nx.edge_betweenness_centrality(und, normalized=True, weight=None)
    keyed = {tuple(sorted(pair)): score for pair, score in raw.items()}
    return {pair: keyed[pair] for pair in sorted(keyed)}


def induced_subnetwork(net: NarrativeNetwork, keep: set[str],
                       edge_keep=None) -> NarrativeNetwork:
    subnodes = [s for s in net.subnodes if s.id in keep]
    parents = {s.parent_supernode for s in subnodes}
    supernodes = [s for s in net.supernodes if s.id in parents]
    edges = [e for e in net.edges if e.src in keep and e.dst in keep
             and (edge_keep is None or edge_keep(e))]
    scored = [ScoredContext(context=_edge_context(e), verb_scores=e.verbs) for e in edges]
    return assemble(subnodes, supernodes, scored, min_edge_weight=1)


def _edge_context(e: NetworkEdge) -> Context:
    key = ContextKey(actant_a=e.src, actant_b=e.dst, sentence_ids=frozenset())
    return Context(key=key, tuple_ids=e.tuple_ids)


def ego_network(net: NarrativeNetwork, subnode_id: str, radius: int = 1) -> NarrativeNetwork:
    """Induced sub-network on the node and everything within the given number
    of hops (undirected), self-loops and labels preserved."""
    if subnode_id not in net.graph:
        raise DataError(f"unknown subnode {subnode_id!r}")
    und = undirected_view(net)
    keep = set(nx.ego_graph(und, subnode_id, radius=radius).nodes)
    return induced_subnetwork(net, keep)


def power_network(net: NarrativeNetwork, roster: set[str],
                  relation_verbs: tuple[str, ...] = DEFAULT_POWER_VERBS) -> NarrativeNetwork:
    """Roster-only view keeping edges whose top verb is a professional or
    personal relation. Roster entries not present in the network are ignored."""
    allow = {stem_verb(v) for v in relation_verbs}
    keep = {s.id for s in net.subnodes} & set(roster)
    return induced_subnetwork(
        net, keep, edge_keep=lambda e: bool(e.verbs) and e.verbs[0].verb in allow)


def first_mention_series(tuples: list[ExtractionTuple],
                         entities: dict[str, frozenset[str]]) -> FirstMentionSeries:
    """Earliest timestamp per entity over its member phrases, chronological.
    Tuples without timestamps are excluded and counted."""
    owners: dict[str, list[str]] = defaultdict(list)
    for entity in sorted(entities):
        for pid in entities[entity]:
            owners[pid].append(entity)
    first: dict[str, str] = {}
    n_undated = 0
    any_dated = False
    for t in tuples:
        if t.timestamp is None:
            n_undated += 1
            continue
        any_dated = True
        for arg in (t.arg1, t.arg2):
            for entity in owners.get(arg.id, ()):
                if entity not in first or t.timestamp < first[entity]:
                    first[entity] = t.timestamp
    if not any_dated and tuples:
        log.warning("no timestamped tuples; first-mention series is empty")
    mentions = sorted(first.items(), key=lambda kv: (kv[1], kv[0]))
    return FirstMentionSeries(mentions=tuple(mentions), n_undated=n_undated)


def collapse_to_supernodes(net: NarrativeNetwork) -> list[NetworkEdge]:
    """Supernode-level edges: weights summed over collapsed subnode edges,
    label reduced to the single highest-scoring verb."""
    parent = {s.id: s.parent_supernode for s in net.subnodes}
    grouped: dict[tuple[str, str], list[NetworkEdge]] = defaultdict(list)
    for e in net.edges:
        grouped[(parent[e.src], parent[e.dst])].append(e)
    out = []
    for (src, dst) in sorted(grouped):
        members = grouped[(src, dst)]
        verbs = [v for e in members for v in e.verbs]
        verbs.sort(key=lambda v: (-v.score, -v.count_in_context, v.verb))
        out.append(NetworkEdge(
            src=src, dst=dst,
            weight=sum(e.weight for e in members),
            verbs=(verbs[0],) if verbs else (),
            tuple_ids=tuple(tid for e in members for tid in e.tuple_ids)))
    return out


def _verb_dict(v: VerbScore) -> dict:
    return {"verb": v.verb, "count_in_context": v.count_in_context,
            "count_in_corpus": v.count_in_corpus, "p_pair": v.p_pair,
            "p_corpus": v.p_corpus, "kl": v.kl, "score": v.score}


def network_to_obj(net: NarrativeNetwork,
                   community_tags: dict[str, list[str]] | None = None) -> dict:
    return {
        "schema_version": "1",
        "supernodes": [{"id": s.id, "seeds": list(s.seeds), "frequency": s.frequency,
                        "children": list(net.supernode_children[s.id])}
                       for s in net.supernodes],
        "nodes": [{"id": s.id, "parent": s.parent_supernode,
                   "label": list(s.label), "frequency": s.frequency,
                   "communities": sorted(community_tags.get(s.id, [])) if community_tags else []}
                  for s in net.subnodes],
        "edges": [{"src": e.src, "dst": e.dst, "weight": e.weight,
                   "verbs": [_verb_dict(v) for v in e.verbs]}
                  for e in net.edges],
    }


def export_json(net: NarrativeNetwork, path,
                community_tags: dict[str, list[str]] | None = None) -> None:
    with open(path, "w", encoding="utf-8") as f:
        json.dump(network_to_obj(net, community_tags), f, sort_keys=True, indent=2)
        f.write("\n")


def export_graphml(net: NarrativeNetwork, path) -> None:
    nx.write_graphml(net.graph, path)


def export_gexf(net: NarrativeNetwork, path) -> None:
    nx.write_gexf(net.graph, path)
    with open(path, encoding="utf-8") as f:
        text = f.read()
    text = re.sub(r'lastmodifieddate="[^"]*"', f'lastmodifieddate="{GEXF_DATE}"', text)
    with open(path, "w", encoding="utf-8") as f:
        f.write(text)


def export_csv(net: NarrativeNetwork, nodes_path, edges_path) -> None:
    with open(nodes_path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["id", "parent", "label", "frequency"])
        for s in net.subnodes:
            w.writerow([s.id, s.parent_supernode, " ".join(s.label), s.frequency])
    with open(edges_path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["src", "dst", "weight", "top_verb", "verbs"])
        for e in net.edges:
            w.writerow([e.src, e.dst, e.weight,
                        e.verbs[0].verb if e.verbs else "",
                        "|".join(v.verb for v in e.verbs)])
