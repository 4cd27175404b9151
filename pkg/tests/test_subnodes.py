from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from narraframe.embedding import EmbeddingStore, PROVIDER_SIDECAR, deterministic_store
from narraframe.errors import MissingEmbeddingError
from narraframe.subnodes import (
    SubnodeParams,
    build_subnodes,
    cluster_supernode,
    corpus_post_frequencies,
    kmeans,
    label_cluster,
    merge_labeled_clusters,
    prune_small_clusters,
)
from narraframe.supernodes import PhraseInventory, Supernode

from conftest import make_phrase, make_tuple


def inv_from_texts(texts, counts=None):
    phrases = {f"p{i}": make_phrase(f"p{i}", text, text.split()[-1])
               for i, text in enumerate(texts)}
    count_map = {pid: (counts or {}).get(pid, 1) for pid in phrases}
    return PhraseInventory(phrases=phrases, counts=count_map)


def supernode_over(inv, seed="s"):
    return Supernode(id=seed, seeds=(seed,), member_phrases=frozenset(inv.phrases),
                     frequency=sum(inv.counts.values()))


def test_kmeans_recovers_separated_clouds():
    rng = np.random.default_rng(0)
    a = rng.normal(loc=0.0, scale=0.05, size=(20, 3))
    b = rng.normal(loc=5.0, scale=0.05, size=(20, 3))
    points = np.vstack([a, b])
    labels, centroids, history = kmeans(points, 2, seed=1)
    # oracle: every point is nearer its own cloud's centroid
    for i, point in enumerate(points):
        own = labels[i]
        other = 1 - own
        assert np.linalg.norm(point - centroids[own]) <= np.linalg.norm(point - centroids[other])
    assert len(set(labels[:20])) == 1 and len(set(labels[20:])) == 1
    assert labels[0] != labels[-1]


@settings(deadline=None)
@given(st.integers(0, 2**31 - 1), st.integers(2, 6))
def test_kmeans_objective_never_increases(seed, k):
    rng = np.random.default_rng(seed % 1000)
    points = rng.normal(size=(30, 4))
    _, _, history = kmeans(points, k, seed=seed)
    for earlier, later in zip(history, history[1:]):
        assert later <= earlier + 1e-9


def test_identical_embeddings_collapse_to_one_cluster():
    inv = inv_from_texts(["same text"] * 5)
    clusters = cluster_supernode(supernode_over(inv), inv, deterministic_store(), k_clusters=3)
    assert len(clusters) == 1
    assert sorted(clusters[0]) == sorted(inv.phrases)


def test_fewer_members_than_k_one_cluster_per_distinct_embedding():
    inv = inv_from_texts(["alpha word", "beta word", "gamma word"])
    clusters = cluster_supernode(supernode_over(inv), inv, deterministic_store(), k_clusters=20)
    assert len(clusters) == 3
    assert all(len(c) == 1 for c in clusters)


def test_clusters_partition_members_at_scale():
    texts = [f"topic{i % 7} filler{i}" for i in range(88)]
    inv = inv_from_texts(texts)
    clusters = cluster_supernode(supernode_over(inv), inv, deterministic_store(), k_clusters=20, seed=42)
    assert len(clusters) <= 20
    flat = [pid for c in clusters for pid in c]
    assert sorted(flat) == sorted(inv.phrases)


def test_missing_embeddings_reported_with_ids():
    inv = inv_from_texts(["one phrase", "two phrase"])
    empty_sidecar = EmbeddingStore(dim=4, provider=PROVIDER_SIDECAR)
    with pytest.raises(MissingEmbeddingError) as err:
        cluster_supernode(supernode_over(inv), inv, empty_sidecar, k_clusters=2)
    assert "p0" in str(err.value) and "p1" in str(err.value)


def test_prune_small_clusters_by_mean_ratio():
    clusters = [[f"a{i}" for i in range(10)], [f"b{i}" for i in range(10)],
                [f"c{i}" for i in range(10)], ["lonely"]]
    survivors = prune_small_clusters(clusters, ratio_threshold=0.25)
    assert [len(c) for c in survivors] == [10, 10, 10]


def test_prune_uniform_sizes_all_survive():
    clusters = [["a", "b"], ["c", "d"], ["e", "f"]]
    assert prune_small_clusters(clusters, ratio_threshold=1.0) == clusters


def test_prune_single_cluster_survives():
    assert prune_small_clusters([["a"]], ratio_threshold=0.9) == [["a"]]


def test_prune_largest_survives_when_all_below_threshold():
    clusters = [["a"], ["b", "c"]]
    assert prune_small_clusters(clusters, ratio_threshold=5.0) == [["b", "c"]]


def label_fixture(text, n_label=5, alpha=0.5):
    inv = inv_from_texts([text])
    doc_freq = corpus_post_frequencies([
        make_tuple(arg1=inv.phrases["p0"], arg2=make_phrase("px", "unrelated", "unrelated"))
    ])
    return label_cluster(["p0"], inv, doc_freq, n_label=n_label, alpha=alpha)


def test_alpha_chain_stops_on_score_drop():
    # tf 10 / 6 / 1 in one post: scores 10, 6, 1; 6 > 0.5*10 but 1 <= 0.5*6
    text = " ".join(["apple"] * 10 + ["brick"] * 6 + ["cedar"])
    label = label_fixture(text)
    assert [ls.word for ls in label] == ["apple", "brick"]
    assert [ls.tf for ls in label] == [10, 6]


def test_single_word_cluster_single_label():
    assert [ls.word for ls in label_fixture("apple apple")] == ["apple"]


def test_label_cap_binds_on_gentle_slope():
    words = ["able", "baker", "cedar", "delta", "early", "fable"]
    text = " ".join(w for w, n in zip(words, [10, 9, 8, 7, 6, 5]) for _ in range(n))
    label = label_fixture(text, n_label=5, alpha=0.5)
    assert len(label) == 5
    assert [ls.word for ls in label] == words[:5]


def test_stopwords_never_label():
    label = label_fixture("the the the the mayor")
    assert [ls.word for ls in label] == ["mayor"]


def test_idf_uses_post_counts():
    # "shared" appears in both posts, "rare" in one; equal tf, rare must win
    t1 = make_tuple(arg1=make_phrase("p0", "shared rare", "rare"), post="post1")
    t2 = make_tuple(arg1=make_phrase("p1", "shared other", "other"), post="post2")
    doc_freq = corpus_post_frequencies([t1, t2])
    inv = PhraseInventory(phrases={"p0": t1.arg1}, counts={"p0": 1})
    label = label_cluster(["p0"], inv, doc_freq, n_label=2, alpha=0.4)
    assert label[0].word == "rare"
    assert label[0].idf == 1.0
    assert label[1].word == "shared"
    assert label[1].idf == 0.5


def test_merge_requires_identical_ordered_labels():
    inv = inv_from_texts(["ping pong", "pong ping", "other thing"])
    store = deterministic_store()
    sn = supernode_over(inv)
    doc_freq = {w: 1 for w in ["ping", "pong", "other", "thing"]}
    la = label_cluster(["p0"], inv, doc_freq, n_label=2, alpha=0.5)
    lb = label_cluster(["p1"], inv, doc_freq, n_label=2, alpha=0.5)
    lc = label_cluster(["p2"], inv, doc_freq, n_label=2, alpha=0.5)
    assert [ls.word for ls in la] == [ls.word for ls in lb]
    merged = merge_labeled_clusters([(["p0"], la), (["p1"], lb), (["p2"], lc)], sn, inv, store)
    assert len(merged) == 2
    united = next(s for s in merged if s.member_phrases == {"p0", "p1"})
    assert united.frequency == 2
    assert abs(np.linalg.norm(np.array(united.centroid)) - 1.0) < 1e-9


def test_order_sensitive_labels_do_not_merge():
    inv = inv_from_texts(["aa bb", "bb aa"])
    sn = supernode_over(inv)
    store = deterministic_store()
    scores_ab = label_cluster(["p0"], inv, {"aa": 2, "bb": 1}, n_label=2, alpha=0.4)
    scores_ba = label_cluster(["p1"], inv, {"aa": 1, "bb": 2}, n_label=2, alpha=0.4)
    assert [ls.word for ls in scores_ab] == ["bb", "aa"]
    assert [ls.word for ls in scores_ba] == ["aa", "bb"]
    merged = merge_labeled_clusters([(["p0"], scores_ab), (["p1"], scores_ba)], sn, inv, store)
    assert len(merged) == 2


def test_build_subnodes_partitions_and_is_deterministic():
    texts = [f"theme{i % 4} word{i}" for i in range(30)]
    inv = inv_from_texts(texts)
    sn = supernode_over(inv)
    store = deterministic_store()
    doc_freq = {w: 1 for text in texts for w in text.split()}
    params = SubnodeParams(k_clusters=6, prune_ratio=0.0, seed=7)
    first = build_subnodes(sn, inv, store, doc_freq, params)
    again = build_subnodes(sn, inv, store, doc_freq, params)
    assert first == again
    seen = [pid for s in first for pid in s.member_phrases]
    assert len(seen) == len(set(seen))
    assert set(seen) <= set(inv.phrases)
    for s in first:
        assert s.label
        assert s.frequency == len(s.member_phrases)  # counts are all 1 here
