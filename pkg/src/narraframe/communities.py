"""Consensus community detection with overlapping membership.

One modularity run is noisy; its per-run randomness is the raw material here.
The partition is recomputed t_max times under distinct seeds, co-assignments
are accumulated into a normalized matrix A, cores form as connected components
of the A >= p_th1 graph, and each core extends once (no cascade) to nodes tied
to it at A >= p_th2. Nodes attached nowhere are discarded.

The per-run partition is a standard two-phase greedy modularity optimizer
(local moves, then graph aggregation). Both the node-visit order and the
candidate-community order are shuffled by the per-run seed; ties in gain go to
the first shuffled candidate, so symmetric choices split evenly across runs
instead of following adjacency order.
"""
from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass

import networkx as nx
import numpy as np

from .errors import ConfigError, InternalInvariantError
from .network import NarrativeNetwork, induced_subnetwork, undirected_view

DEFAULT_T_MAX = 100
DEFAULT_P_TH1 = 0.7
DEFAULT_P_TH2 = 0.4
DEFAULT_BASE_SEED = 0

GAIN_EPS = 1e-12

STATUS_CORE = "core"
STATUS_SHARED = "shared"
STATUS_DISCARDED = "discarded"

FILTER_MEAN = "mean"
FILTER_ABSOLUTE = "absolute"


@dataclass(frozen=True)
class CooccurrenceMatrix:
    nodes: tuple[str, ...]
    matrix: np.ndarray
    t_max: int

    @property
    def n(self) -> int:
        return len(self.nodes)

    def value(self, a: str, b: str) -> float:
        idx = {node: i for i, node in enumerate(self.nodes)}
        return float(self.matrix[idx[a], idx[b]])


@dataclass(frozen=True)
class CommunityAssignment:
    communities: tuple[str, ...]
    core: dict[str, frozenset[str]]
    extended: dict[str, frozenset[str]]
    status: dict[str, str]
    strengths: dict[str, dict[str, float]]
    matrix: CooccurrenceMatrix

    @property
    def m(self) -> int:
        return len(self.communities)


@dataclass(frozen=True)
class CommunitySubgraphs:
    per_community: dict[str, NarrativeNetwork]
    union: NarrativeNetwork
    tags: dict[str, list[str]]


def _as_graph(net) -> nx.Graph:
    if isinstance(net, NarrativeNetwork):
        return undirected_view(net)
    if isinstance(net, nx.Graph) and not net.is_directed():
        return net
    raise ConfigError("expected a NarrativeNetwork or an undirected graph")


def _adjacency(g: nx.Graph) -> tuple[dict, float]:
    """Symmetric weight maps with self-loops stored at double weight, so that
    node strength is a plain row sum and 2m the grand sum."""
    adj: dict[str, dict[str, float]] = {u: {} for u in g.nodes}
    for u, v, data in g.edges(data=True):
        w = float(data.get("weight", 1.0))
        if u == v:
            adj[u][u] = adj[u].get(u, 0.0) + 2.0 * w
        else:
            adj[u][v] = adj[u].get(v, 0.0) + w
            adj[v][u] = adj[v].get(u, 0.0) + w
    two_m = sum(sum(nbrs.values()) for nbrs in adj.values())
    return adj, two_m / 2.0


def _local_moves(adj, degrees, m, rng, node_to_com, com_total) -> bool:
    moved_any = False
    improved = True
    while improved:
        improved = False
        order = sorted(adj)
        rng.shuffle(order)
        for u in order:
            cu = node_to_com[u]
            ku = degrees[u]
            weight_to: dict[str, float] = defaultdict(float)
            for v, w in adj[u].items():
                if v != u:
                    weight_to[node_to_com[v]] += w
            com_total[cu] -= ku
            best_com = cu
            best_gain = weight_to.get(cu, 0.0) - com_total[cu] * ku / (2.0 * m)
            candidates = sorted(weight_to)
            rng.shuffle(candidates)
            for c in candidates:
                if c == cu:
                    continue
                gain = weight_to[c] - com_total[c] * ku / (2.0 * m)
                if gain > best_gain + GAIN_EPS:
                    best_gain = gain
                    best_com = c
            com_total[best_com] += ku
            if best_com != cu:
                node_to_com[u] = best_com
                improved = True
                moved_any = True
    return moved_any


def _aggregate(adj, node_to_com) -> dict:
    new_adj: dict[str, dict[str, float]] = defaultdict(lambda: defaultdict(float))
    for u, nbrs in adj.items():
        cu = node_to_com[u]
        for v, w in nbrs.items():
            new_adj[cu][node_to_com[v]] += w
    return {u: dict(nbrs) for u, nbrs in new_adj.items()}


def modularity_partition(net, seed: int) -> dict[str, int]:
    """Greedy modularity labels for every node; randomness comes only from
    the seed. Labels are renumbered by each community's smallest member."""
    g = _as_graph(net)
    nodes = sorted(g.nodes)
    if not nodes:
        return {}
    adj, m = _adjacency(g)
    membership = {u: u for u in nodes}
    if m > 0:
        rng = random.Random(seed)
        current = adj
        while True:
            node_to_com = {u: u for u in current}
            degrees = {u: sum(nbrs.values()) for u, nbrs in current.items()}
            com_total = dict(degrees)
            if not _local_moves(current, degrees, m, rng, node_to_com, com_total):
                break
            membership = {orig: node_to_com[membership[orig]] for orig in membership}
            current = _aggregate(current, node_to_com)
    groups: dict[str, list[str]] = defaultdict(list)
    for node in nodes:
        groups[membership[node]].append(node)
    ordered = sorted(groups.values(), key=lambda members: members[0])
    return {node: label for label, members in enumerate(ordered) for node in members}


def cooccurrence_matrix(net, t_max: int = DEFAULT_T_MAX,
                        base_seed: int = DEFAULT_BASE_SEED) -> CooccurrenceMatrix:
    """Normalized co-assignment probabilities over t_max seeded runs."""
    if t_max < 1:
        raise ConfigError("t_max must be at least 1")
    g = _as_graph(net)
    nodes = tuple(sorted(g.nodes))
    index = {node: i for i, node in enumerate(nodes)}
    counts = np.zeros((len(nodes), len(nodes)), dtype=float)
    for run in range(t_max):
        labels = modularity_partition(g, seed=base_seed + run)
        groups: dict[int, list[int]] = defaultdict(list)
        for node, label in labels.items():
            groups[label].append(index[node])
        for members in groups.values():
            for i in members:
                for j in members:
                    counts[i, j] += 1.0
    return CooccurrenceMatrix(nodes=nodes, matrix=counts / t_max, t_max=t_max)


def consensus_communities(net, t_max: int = DEFAULT_T_MAX,
                          p_th1: float = DEFAULT_P_TH1,
                          p_th2: float = DEFAULT_P_TH2,
                          base_seed: int = DEFAULT_BASE_SEED) -> CommunityAssignment:
    """Cores are connected components (>= 2 nodes) of the A >= p_th1 graph;
    each core extends in a single pass to nodes with A >= p_th2 toward some
    core member. Extension never cascades: it reads the core snapshot only."""
    if not 0.0 < p_th2 < p_th1 <= 1.0:
        raise ConfigError("thresholds must satisfy 0 < p_th2 < p_th1 <= 1")
    co = cooccurrence_matrix(net, t_max=t_max, base_seed=base_seed)
    nodes, a = co.nodes, co.matrix
    index = {node: i for i, node in enumerate(nodes)}

    core_graph = nx.Graph()
    core_graph.add_nodes_from(nodes)
    for i, u in enumerate(nodes):
        for j in range(i + 1, len(nodes)):
            if a[i, j] >= p_th1:
                core_graph.add_edge(u, nodes[j])
    cores = sorted((tuple(sorted(c)) for c in nx.connected_components(core_graph)
                    if len(c) >= 2), key=lambda c: c[0])
    community_ids = tuple(f"c{k}" for k in range(len(cores)))

    core_map: dict[str, frozenset[str]] = {}
    extended_map: dict[str, frozenset[str]] = {}
    strengths: dict[str, dict[str, float]] = {node: {} for node in nodes}
    for cid, members in zip(community_ids, cores):
        member_rows = [index[node] for node in members]
        core_map[cid] = frozenset(members)
        extended = set(members)
        for node in nodes:
            strength = max(a[row, index[node]] for row in member_rows
                           if nodes[row] != node)
            strengths[node][cid] = float(strength)
            if node not in core_map[cid] and strength >= p_th2:
                extended.add(node)
        extended_map[cid] = frozenset(extended)

    status = {}
    core_members = set().union(*core_map.values()) if core_map else set()
    extended_members = set().union(*extended_map.values()) if extended_map else set()
    for node in nodes:
        if node in core_members:
            status[node] = STATUS_CORE
        elif node in extended_members:
            status[node] = STATUS_SHARED
        else:
            status[node] = STATUS_DISCARDED
    return CommunityAssignment(communities=community_ids, core=core_map,
                               extended=extended_map, status=status,
                               strengths=strengths, matrix=co)


def frequency_filter(assignment: CommunityAssignment,
                     frequencies: dict[str, float], mode: str = FILTER_MEAN,
                     threshold: float | None = None) -> CommunityAssignment:
    """View with low-frequency nodes removed; communities whose extended set
    falls below 2 nodes are dropped. The input assignment is untouched."""
    nodes = assignment.matrix.nodes
    missing = [node for node in nodes if node not in frequencies]
    if missing:
        raise InternalInvariantError(f"no frequency for nodes {missing[:5]}")
    if mode == FILTER_MEAN:
        cutoff = sum(frequencies[node] for node in nodes) / len(nodes) if nodes else 0.0
    elif mode == FILTER_ABSOLUTE:
        if threshold is None:
            raise ConfigError("absolute mode needs a threshold")
        cutoff = threshold
    else:
        raise ConfigError(f"mode must be {FILTER_MEAN!r} or {FILTER_ABSOLUTE!r}")
    keep = {node for node in nodes if frequencies[node] >= cutoff}

    communities, core_map, extended_map = [], {}, {}
    for cid in assignment.communities:
        extended = assignment.extended[cid] & keep
        if len(extended) < 2:
            continue
        communities.append(cid)
        core_map[cid] = assignment.core[cid] & keep
        extended_map[cid] = extended
    surviving = tuple(communities)
    status = {}
    for node in nodes:
        if any(node in core_map[cid] for cid in surviving):
            status[node] = STATUS_CORE
        elif any(node in extended_map[cid] for cid in surviving):
            status[node] = STATUS_SHARED
        else:
            status[node] = STATUS_DISCARDED
    strengths = {node: {cid: assignment.strengths[node][cid] for cid in surviving}
                 for node in nodes}
    return CommunityAssignment(communities=surviving, core=core_map,
                               extended=extended_map, status=status,
                               strengths=strengths, matrix=assignment.matrix)


def community_subgraphs(assignment: CommunityAssignment,
                        net: NarrativeNetwork) -> CommunitySubgraphs:
    """Induced sub-network per extended community, plus their graph union:
    an edge joins the union only when its endpoints share a community."""
    known = {s.id for s in net.subnodes}
    stray = [node for node in assignment.matrix.nodes if node not in known]
    if stray:
        raise InternalInvariantError(f"assignment references unknown subnodes {stray[:5]}")
    tags: dict[str, list[str]] = defaultdict(list)
    for cid in assignment.communities:
        for node in sorted(assignment.extended[cid]):
            tags[node].append(cid)
    per_community = {cid: induced_subnetwork(net, set(assignment.extended[cid]))
                     for cid in assignment.communities}
    union_nodes = {node for cid in assignment.communities
                   for node in assignment.extended[cid]}

    def shares_community(edge):
        return bool(set(tags.get(edge.src, ())) & set(tags.get(edge.dst, ())))

    union = induced_subnetwork(net, union_nodes, edge_keep=shares_community)
    return CommunitySubgraphs(per_community=per_community, union=union,
                              tags=dict(tags))
