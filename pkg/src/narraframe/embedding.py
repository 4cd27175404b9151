"""Phrase embeddings: sidecar loading, unit-norm guarantee, cosine, and a
deterministic test provider.

Real embeddings are produced upstream and arrive in a sidecar file (one JSON
record per line, header declares the dimension). The core never computes
model embeddings; the deterministic provider exists so fixtures and synthetic
corpora get stable, dependency-free geometry.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DataError, MissingEmbeddingError, SchemaVersionError
from .interchange import SCHEMA_VERSION, PhraseRef, read_text_checked
from .stemming import stem_verb

NORM_TOL = 1e-6

PROVIDER_SIDECAR = "sidecar-file"
PROVIDER_TEST = "deterministic-test"

# Vectors are plain float64 numpy arrays, unit Euclidean norm after load.
EmbeddingVector = np.ndarray


@dataclass
class EmbeddingStore:
    dim: int
    provider: str
    vectors: dict[str, np.ndarray] = field(default_factory=dict)


def normalize(values) -> np.ndarray:
    v = np.asarray(values, dtype=np.float64)
    norm = float(np.linalg.norm(v))
    if norm == 0.0 or not np.isfinite(norm):
        raise DataError("cannot normalize zero or non-finite vector")
    return v / norm


def tokenize(text: str) -> list[str]:
    out = []
    word = []
    for ch in text.lower():
        if ch.isalnum():
            word.append(ch)
        elif word:
            out.append("".join(word))
            word = []
    if word:
        out.append("".join(word))
    return out or [text.lower()]


def _test_vector(text: str, dim: int) -> np.ndarray:
    # Each token contributes two hashed bumps; summation over the token
    # multiset makes the vector order-insensitive and platform-stable.
    # Tokens are stemmed first so inflectional variants of a phrase land
    # near each other, as they would under the contextual models this
    # provider stands in for.
    v = np.zeros(dim, dtype=np.float64)
    for tok in tokenize(text):
        tok = stem_verb(tok)
        digest = hashlib.sha256(tok.encode("utf-8")).digest()
        major = int.from_bytes(digest[:4], "big") % dim
        minor = int.from_bytes(digest[4:8], "big") % dim
        v[major] += 1.0
        v[minor] += 0.5
    return normalize(v)


def deterministic_store(dim: int = 64) -> EmbeddingStore:
    return EmbeddingStore(dim=dim, provider=PROVIDER_TEST)


def load_sidecar(path) -> EmbeddingStore:
    """Read the sidecar embedding file; every vector is renormalized rather
    than trusted, and the declared dimension is enforced."""
    lines = read_text_checked(path, "sidecar").splitlines()
    header = None
    store = None
    for lineno, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise DataError(f"sidecar line {lineno}: invalid JSON: {exc.msg}") from exc
        if header is None:
            if not isinstance(obj, dict) or "schema_version" not in obj:
                raise SchemaVersionError("sidecar must start with a schema_version header")
            if obj["schema_version"] != SCHEMA_VERSION:
                raise SchemaVersionError(
                    f"sidecar schema_version {obj['schema_version']!r} unsupported")
            dim = obj.get("dim")
            if not isinstance(dim, int) or dim < 1:
                raise DataError("sidecar header must declare a positive integer dim")
            header = obj
            store = EmbeddingStore(dim=dim, provider=PROVIDER_SIDECAR)
            continue
        pid = obj.get("phrase_id")
        vec = obj.get("vector")
        if not isinstance(pid, str) or not pid:
            raise DataError(f"sidecar line {lineno}: missing phrase_id")
        if not isinstance(vec, list) or len(vec) != store.dim:
            raise DataError(f"sidecar line {lineno}: vector length != declared dim {store.dim}")
        if pid in store.vectors:
            raise DataError(f"sidecar line {lineno}: duplicate phrase_id {pid!r}")
        store.vectors[pid] = normalize(vec)
    if store is None:
        raise SchemaVersionError("sidecar file is empty (no header)")
    return store


def embed_text(store: EmbeddingStore, text: str) -> np.ndarray:
    """Vector for an arbitrary phrase string. The test provider derives it
    from the token multiset; the sidecar provider requires a row keyed by
    the text itself (relationship phrases are stored that way)."""
    if store.provider == PROVIDER_TEST:
        cached = store.vectors.get(text)
        if cached is None:
            cached = _test_vector(text, store.dim)
            store.vectors[text] = cached
        return cached
    if text in store.vectors:
        return store.vectors[text]
    raise MissingEmbeddingError([text])


def get_embedding(store: EmbeddingStore, phrase: PhraseRef) -> np.ndarray:
    if store.provider == PROVIDER_TEST:
        return embed_text(store, phrase.text)
    if phrase.id in store.vectors:
        return store.vectors[phrase.id]
    raise MissingEmbeddingError([phrase.id])


def require_embeddings(store: EmbeddingStore, phrases: list[PhraseRef]) -> None:
    """Fail fast with the full list of unknown ids, not just the first."""
    if store.provider == PROVIDER_TEST:
        return
    missing = {p.id for p in phrases if p.id not in store.vectors}
    if missing:
        raise MissingEmbeddingError(missing)


def cosine(a: np.ndarray, b: np.ndarray) -> float:
    """Dot product of unit vectors, clipped into [-1, 1]."""
    if a.shape != b.shape:
        raise DataError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return float(np.clip(np.dot(a, b), -1.0, 1.0))
