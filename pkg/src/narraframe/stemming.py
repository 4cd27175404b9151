"""Suffix-stripping stemmer used wherever inflectional variants must fold
together (verb significance counting, test embeddings, match normalization).
"""
from __future__ import annotations


def _undouble(w: str) -> str:
    if len(w) >= 2 and w[-1] == w[-2] and w[-1] not in "aeioulsz":
        return w[:-1]
    return w


def _strip_pass(w: str) -> str:
    n = len(w)
    if n <= 3:
        return w
    if w.endswith("ies") and n >= 5:
        return w[:-3] + "i"
    if w.endswith("sses"):
        return w[:-2]
    if w.endswith("s") and not w.endswith(("ss", "us", "is")) and n - 1 >= 4:
        return w[:-1]
    if w.endswith("ing") and n - 3 >= 3:
        return _undouble(w[:-3])
    if w.endswith("ed") and n - 2 >= 3:
        return _undouble(w[:-2])
    if w.endswith("e") and n - 1 >= 4:
        return w[:-1]
    return w


def stem_verb(v: str) -> str:
    """Suffix-stripping stem, iterated to a fixed point (hence idempotent).

    Words of three letters or fewer pass through untouched. Plural, -ing,
    -ed and final-e endings strip with minimum-stem guards; doubled final
    consonants (except l/s/z) collapse after -ing/-ed removal.
    """
    w = v.lower()
    while True:
        nxt = _strip_pass(w)
        if nxt == w:
            return w
        w = nxt
