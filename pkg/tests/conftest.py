"""Shared fixture factories for building small corpora and networks by hand."""
from __future__ import annotations

import json

import pytest

from narraframe.interchange import SCHEMA_VERSION, ExtractionTuple, PhraseRef, tuple_to_record
from narraframe.network import assemble
from narraframe.significance import Context, ContextKey, ScoredContext, VerbScore
from narraframe.subnodes import Subnode
from narraframe.supernodes import Supernode


def make_phrase(pid="p1", text="the mayor", head="mayor", ner_type=None, resolved=False):
    return PhraseRef(id=pid, text=text, head=head, ner_type=ner_type,
                     resolved_from_pronoun=resolved)


def make_tuple(arg1=None, rel="met", verbs=None, arg2=None, pattern="SVO",
               doc="d1", post="post1", sentence=0, span=(0, 5), timestamp=None,
               sentence_tokens=None):
    return ExtractionTuple(
        arg1=arg1 or make_phrase(),
        rel_text=rel,
        rel_verbs=tuple(verbs) if verbs is not None else (rel,),
        arg2=arg2 or make_phrase(pid="p2", text="the governor", head="governor"),
        pattern=pattern,
        doc_id=doc,
        post_id=post,
        sentence_id=sentence,
        token_span=span,
        timestamp=timestamp,
        sentence_tokens=sentence_tokens,
    )


def write_interchange(path, tuples, header=None):
    lines = [json.dumps(header or {"schema_version": SCHEMA_VERSION})]
    for t in tuples:
        lines.append(json.dumps(tuple_to_record(t)))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


@pytest.fixture
def corpus_file(tmp_path):
    def _write(tuples, name="corpus.jsonl", header=None):
        return write_interchange(tmp_path / name, tuples, header=header)

    return _write


def make_sub(sid, parent, label=("thing",), freq=1, members=()):
    return Subnode(id=sid, parent_supernode=parent, label=tuple(label),
                   label_scores=(), member_phrases=frozenset(members),
                   frequency=freq, centroid=(1.0,))


def make_super(sid, seeds=None, members=(), freq=1):
    return Supernode(id=sid, seeds=tuple(seeds or (sid,)),
                     member_phrases=frozenset(members), frequency=freq)


def make_score(verb, kl=1.0, count=2, corpus=4):
    return VerbScore(verb=verb, count_in_context=count, count_in_corpus=corpus,
                     p_pair=0.5, p_corpus=0.1, kl=kl, score=kl)


def make_scored(src, dst, tuple_ids, verbs=()):
    key = ContextKey(actant_a=src, actant_b=dst,
                     sentence_ids=frozenset({("d1", tuple_ids[0] if tuple_ids else 0)}))
    return ScoredContext(context=Context(key=key, tuple_ids=tuple(tuple_ids)),
                         verb_scores=tuple(verbs))


def make_net(edges, parent=None, isolated=(), min_edge_weight=1):
    """edges: (src, dst) or (src, dst, options) with weight / verbs options.
    Each node gets its own single-child supernode unless parent maps it."""
    parent = parent or {}
    node_ids = sorted({n for e in edges for n in e[:2]} | set(isolated))
    subnodes = [make_sub(n, parent.get(n, f"sup-{n}")) for n in node_ids]
    supernodes = [make_super(s) for s in sorted({s.parent_supernode for s in subnodes})]
    scored = []
    next_tid = 0
    for e in edges:
        opts = e[2] if len(e) > 2 else {}
        weight = opts.get("weight", 2)
        ids = tuple(range(next_tid, next_tid + weight))
        next_tid += weight
        scored.append(make_scored(e[0], e[1], ids, opts.get("verbs", ())))
    return assemble(subnodes, supernodes, scored, min_edge_weight=min_edge_weight)
