from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from narraframe.ranking import normalize_term, rank_entities

from conftest import make_phrase, make_tuple


def tuple_with_heads(head1, head2, ner1=None, ner2=None, sentence=0):
    return make_tuple(
        arg1=make_phrase(f"a:{head1}:{sentence}", head1, head1, ner_type=ner1),
        arg2=make_phrase(f"b:{head2}:{sentence}", head2, head2, ner_type=ner2),
        sentence=sentence,
    )


def test_empty_corpus_empty_ranking():
    assert rank_entities([], min_frequency=1) == []


def test_tagged_headword_counts_in_both_lists():
    tuples = [tuple_with_heads("christie", "lane", ner1="person", sentence=i) for i in range(4)]
    tuples.append(tuple_with_heads("bridge", "lane", sentence=9))
    ranking = rank_entities(tuples, min_frequency=1)
    top = ranking[0]
    assert top.term == "christie"
    assert (top.ner_count, top.headword_count, top.combined_score) == (4, 4, 8)
    assert top.rank == 1


def test_named_entity_outranks_concept_at_equal_headword_count():
    tuples = []
    for i in range(3):
        tuples.append(tuple_with_heads("clinton", "email", ner1="person", sentence=i))
    ranking = {e.term: e for e in rank_entities(tuples, min_frequency=1)}
    assert ranking["clinton"].combined_score == 6
    assert ranking["email"].combined_score == 3
    assert ranking["clinton"].rank < ranking["email"].rank


def test_truncation_below_min_frequency():
    tuples = [tuple_with_heads("mayor", "port", sentence=i) for i in range(3)]
    tuples.append(tuple_with_heads("mayor", "fort", sentence=9))
    ranking = rank_entities(tuples, min_frequency=4)
    assert [e.term for e in ranking] == ["mayor"]
    assert all(e.combined_score >= 4 for e in ranking)


def test_tie_break_is_lexicographic():
    tuples = [tuple_with_heads("zebra", "apple", sentence=i) for i in range(2)]
    ranking = rank_entities(tuples, min_frequency=1)
    assert [e.term for e in ranking] == ["apple", "zebra"]


def test_head_normalization_strips_punctuation_and_case():
    assert normalize_term("Podesta,") == "podesta"
    assert normalize_term("  Email ") == "email"
    t = make_tuple(arg1=make_phrase("x1", "Podesta,", "Podesta,"), sentence=0)
    ranking = rank_entities([t], min_frequency=1)
    assert "podesta" in {e.term for e in ranking}


heads = st.sampled_from(["christie", "bridge", "lane", "port", "email", "mayor"])
corpora = st.lists(st.tuples(heads, st.booleans(), heads, st.booleans()), max_size=30)


@given(corpora)
def test_rank_permutation_invariance(rows):
    tuples = [
        tuple_with_heads(h1, h2, ner1="person" if n1 else None,
                         ner2="organization" if n2 else None, sentence=i)
        for i, (h1, n1, h2, n2) in enumerate(rows)
    ]
    forward = rank_entities(tuples, min_frequency=1)
    assert rank_entities(list(reversed(tuples)), min_frequency=1) == forward


@given(corpora, heads)
def test_adding_a_mention_never_decreases_score(rows, term):
    tuples = [
        tuple_with_heads(h1, h2, ner1="person" if n1 else None, sentence=i)
        for i, (h1, n1, h2, _) in enumerate(rows)
    ]
    before = {e.term: e.combined_score for e in rank_entities(tuples, min_frequency=1)}
    extra = tuple_with_heads(term, "filler", sentence=999)
    after = {e.term: e.combined_score for e in rank_entities(tuples + [extra], min_frequency=1)}
    assert after[term] >= before.get(term, 0)
