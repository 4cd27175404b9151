"""Subnode creation: k-means over member-phrase embeddings, small-cluster
pruning, TF*IDF labeling with the alpha stopping rule, and merging of
identically labeled clusters.

Clustering is plain Lloyd iteration with k-means++ seeding, written out here
rather than delegated so the convergence rule (max centroid shift < 1e-6,
cap 300 iterations) and the per-iteration objective are inspectable.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .embedding import EmbeddingStore, get_embedding, tokenize
from .errors import ConfigError, InternalInvariantError, MissingEmbeddingError
from .interchange import ExtractionTuple
from .supernodes import PhraseInventory, Supernode

DEFAULT_K_CLUSTERS = 20
DEFAULT_PRUNE_RATIO = 0.25
DEFAULT_ALPHA = 0.5
DEFAULT_N_LABEL = 5
DEFAULT_SEED = 42

KMEANS_TOL = 1e-6
KMEANS_MAX_ITER = 300

# Excluded from labels only; clustering still sees full phrase geometry.
STOPWORDS = frozenset("""
the a an of to in for on at by with from and or but if then than so nor
is was are were be been being am do does did have has had
that this these those it its he she his her him they them their our your my
as not no yes s t
""".split())


@dataclass(frozen=True)
class LabelScore:
    word: str
    tf: int
    idf: float
    score: float


@dataclass(frozen=True)
class Subnode:
    id: str
    parent_supernode: str
    label: tuple[str, ...]
    label_scores: tuple[LabelScore, ...]
    member_phrases: frozenset[str]
    frequency: int
    centroid: tuple[float, ...]


@dataclass(frozen=True)
class SubnodeParams:
    k_clusters: int = DEFAULT_K_CLUSTERS
    prune_ratio: float = DEFAULT_PRUNE_RATIO
    alpha: float = DEFAULT_ALPHA
    n_label: int = DEFAULT_N_LABEL
    seed: int = DEFAULT_SEED


def _kmeans_pp(points: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = len(points)
    centroids = [points[int(rng.integers(n))]]
    d2 = ((points - centroids[0]) ** 2).sum(axis=1)
    for _ in range(k - 1):
        total = float(d2.sum())
        if total <= 0.0:
            idx = int(rng.integers(n))
        else:
            idx = int(rng.choice(n, p=d2 / total))
        centroids.append(points[idx])
        d2 = np.minimum(d2, ((points - points[idx]) ** 2).sum(axis=1))
    return np.array(centroids)


def kmeans(points: np.ndarray, k: int, seed: int,
           tol: float = KMEANS_TOL, max_iter: int = KMEANS_MAX_ITER):
    """Lloyd iterations; returns (labels, centroids, objective_history).

    The objective (sum of squared point-to-centroid distances) is recorded
    after each assignment step and is non-increasing across iterations.
    """
    rng = np.random.default_rng(seed)
    centroids = _kmeans_pp(points, k, rng)
    history: list[float] = []
    labels = np.zeros(len(points), dtype=int)
    for _ in range(max_iter):
        d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        labels = d2.argmin(axis=1)
        history.append(float(d2[np.arange(len(points)), labels].sum()))
        new_centroids = centroids.copy()
        for j in range(k):
            members = points[labels == j]
            if len(members):
                new_centroids[j] = members.mean(axis=0)
        shift = float(np.max(np.linalg.norm(new_centroids - centroids, axis=1)))
        centroids = new_centroids
        if shift < tol:
            break
    return labels, centroids, history


def cluster_supernode(s: Supernode, inventory: PhraseInventory, store: EmbeddingStore,
                      k_clusters: int = DEFAULT_K_CLUSTERS,
                      seed: int = DEFAULT_SEED) -> list[list[str]]:
    """Partition member phrases into raw clusters of phrase ids.

    Fewer members than k_clusters: each distinct embedding becomes its own
    cluster (k-means would only chase duplicates). Empty clusters are dropped.
    """
    member_ids = sorted(s.member_phrases)
    if not member_ids:
        raise InternalInvariantError(f"supernode {s.id!r} has no member phrases to cluster")
    if k_clusters < 1:
        raise ConfigError("k_clusters must be >= 1")
    missing = [pid for pid in member_ids if pid not in inventory.phrases]
    if missing:
        raise InternalInvariantError(f"phrases absent from inventory: {missing[:5]}")
    vectors = {}
    unknown = []
    for pid in member_ids:
        try:
            vectors[pid] = get_embedding(store, inventory.phrases[pid])
        except MissingEmbeddingError:
            unknown.append(pid)
    if unknown:
        raise MissingEmbeddingError(unknown)
    if len(member_ids) < k_clusters:
        groups: dict[tuple, list[str]] = {}
        for pid in member_ids:
            groups.setdefault(tuple(vectors[pid].tolist()), []).append(pid)
        return list(groups.values())
    points = np.array([vectors[pid] for pid in member_ids])
    labels, _, _ = kmeans(points, k_clusters, seed)
    clusters: dict[int, list[str]] = {}
    for pid, lab in zip(member_ids, labels):
        clusters.setdefault(int(lab), []).append(pid)
    return [clusters[j] for j in sorted(clusters)]


def prune_small_clusters(clusters: list[list[str]],
                         ratio_threshold: float = DEFAULT_PRUNE_RATIO) -> list[list[str]]:
    """Drop clusters small relative to the mean size; never drop everything."""
    if not clusters:
        return []
    mean_size = sum(len(c) for c in clusters) / len(clusters)
    survivors = [c for c in clusters if len(c) / mean_size >= ratio_threshold]
    if not survivors:
        survivors = [max(clusters, key=len)]
    return survivors


def corpus_post_frequencies(tuples: list[ExtractionTuple]) -> dict[str, int]:
    """Number of posts each word appears in, over argument and relation text."""
    post_words: dict[str, set[str]] = {}
    for t in tuples:
        words = post_words.setdefault(t.post_id, set())
        words.update(tokenize(t.arg1.text))
        words.update(tokenize(t.arg2.text))
        words.update(tokenize(t.rel_text))
    freq: Counter[str] = Counter()
    for words in post_words.values():
        freq.update(words)
    return dict(freq)


def label_cluster(cluster: list[str], inventory: PhraseInventory,
                  corpus_doc_freq: dict[str, int],
                  n_label: int = DEFAULT_N_LABEL,
                  alpha: float = DEFAULT_ALPHA) -> list[LabelScore]:
    """Rank cluster words by TF*IDF, then walk the ranking emitting a word
    only while its score exceeds alpha times its predecessor's, up to n_label.

    TF counts word occurrences (with multiplicity) across the distinct member
    phrase texts; IDF is 1 / number-of-posts containing the word. Stopwords
    are skipped unless they are all the cluster has.
    """
    if not cluster:
        raise InternalInvariantError("cannot label an empty cluster")
    if not 0.0 < alpha < 1.0:
        raise ConfigError("alpha must be in (0, 1)")
    if n_label < 1:
        raise ConfigError("n_label must be >= 1")
    tf: Counter[str] = Counter()
    for pid in cluster:
        tf.update(tokenize(inventory.phrases[pid].text))
    content = {w: c for w, c in tf.items() if w not in STOPWORDS}
    if not content:
        content = dict(tf)
    scored = []
    for word, count in content.items():
        posts = corpus_doc_freq.get(word, 0)
        if posts < 1:
            raise InternalInvariantError(
                f"word {word!r} in a cluster but in no post; corpus frequencies stale")
        idf = 1.0 / posts
        scored.append(LabelScore(word=word, tf=count, idf=idf, score=count * idf))
    scored.sort(key=lambda ls: (-ls.score, ls.word))
    emitted = [scored[0]]
    for ls in scored[1:]:
        if len(emitted) >= n_label:
            break
        if ls.score > alpha * emitted[-1].score:
            emitted.append(ls)
        else:
            break
    return emitted


def merge_labeled_clusters(labeled: list[tuple[list[str], list[LabelScore]]],
                           supernode: Supernode, inventory: PhraseInventory,
                           store: EmbeddingStore) -> list[Subnode]:
    """Union clusters with identical ordered labels into subnodes.

    Label order matters: [a, b] and [b, a] stay distinct. Centroids are the
    normalized mean of member embeddings; frequencies sum mention counts.
    """
    groups: dict[tuple[str, ...], dict] = {}
    for cluster, scores in labeled:
        key = tuple(ls.word for ls in scores)
        slot = groups.setdefault(key, {"members": [], "scores": scores})
        slot["members"].extend(cluster)
    out = []
    for index, (label, slot) in enumerate(groups.items()):
        members = sorted(set(slot["members"]))
        vectors = np.array([get_embedding(store, inventory.phrases[pid]) for pid in members])
        mean = vectors.mean(axis=0)
        norm = float(np.linalg.norm(mean))
        centroid = mean / norm if norm > 0 else mean
        out.append(Subnode(
            id=f"{supernode.id}/{index}",
            parent_supernode=supernode.id,
            label=label,
            label_scores=tuple(slot["scores"]),
            member_phrases=frozenset(members),
            frequency=sum(inventory.counts[pid] for pid in members),
            centroid=tuple(float(x) for x in centroid),
        ))
    return out


def build_subnodes(supernode: Supernode, inventory: PhraseInventory,
                   store: EmbeddingStore, corpus_doc_freq: dict[str, int],
                   params: SubnodeParams = SubnodeParams()) -> list[Subnode]:
    """cluster -> prune -> label -> merge for one supernode."""
    clusters = cluster_supernode(supernode, inventory, store,
                                 k_clusters=params.k_clusters, seed=params.seed)
    survivors = prune_small_clusters(clusters, params.prune_ratio)
    labeled = [
        (cluster, label_cluster(cluster, inventory, corpus_doc_freq,
                                n_label=params.n_label, alpha=params.alpha))
        for cluster in survivors
    ]
    return merge_labeled_clusters(labeled, supernode, inventory, store)
