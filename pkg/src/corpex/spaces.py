"""Named vector spaces, cosine distance, exact kNN, and list-overlap stats.

Distances are always cosine. They are computed in float64 and rounded to
float32 wherever they are stored or ranked, so results are identical before
and after a bundle round-trips through disk. kNN is exact blocked brute
force; ties are broken by doc_id lexicographic order so every downstream
explanation is deterministic and independent of ingestion order.
"""

from __future__ import annotations

import functools
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp

from .errors import (
    BundleError,
    ConfigMismatchError,
    UnknownSpaceError,
    UnsupportedOperationError,
)

log = logging.getLogger(__name__)

SPARSE = "sparse"
DENSE = "dense"


@dataclass(frozen=True)
class SparseVector:
    """Nonzero components of one document vector, indices ascending."""

    indices: np.ndarray  # int32, strictly ascending term ids
    values: np.ndarray  # float32
    dim: int

    @property
    def nnz(self) -> int:
        return len(self.indices)


Vector = Union[SparseVector, np.ndarray]


@dataclass(frozen=True)
class VectorSpace:
    """Per-document vectors of one representation, rows aligned to doc_ids."""

    name: str
    kind: str  # SPARSE or DENSE
    doc_ids: tuple[str, ...]
    matrix: Union[sp.csr_matrix, np.ndarray]  # float32 storage

    @property
    def n_docs(self) -> int:
        return self.matrix.shape[0]

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def vector(self, ordinal: int) -> Vector:
        if self.kind == SPARSE:
            start, end = self.matrix.indptr[ordinal], self.matrix.indptr[ordinal + 1]
            return SparseVector(
                self.matrix.indices[start:end],
                self.matrix.data[start:end],
                self.dim,
            )
        return self.matrix[ordinal]

    @functools.cached_property
    def norms(self) -> np.ndarray:
        """float64 Euclidean norms per row, sequential-summation order."""
        if self.kind == SPARSE:
            data = self.matrix.data.astype(np.float64)
            sq = data * data
            indptr = self.matrix.indptr
            lengths = np.diff(indptr)
            if len(sq) == 0:
                return np.zeros(self.n_docs)
            starts = np.minimum(indptr[:-1], len(sq) - 1)
            norms2 = np.add.reduceat(sq, starts)
            norms2[lengths == 0] = 0.0
            return np.sqrt(norms2)
        x = self.matrix.astype(np.float64)
        return np.sqrt(np.einsum("ij,ij->i", x, x))

    @functools.cached_property
    def _matrix64(self):
        return self.matrix.astype(np.float64)

    @functools.cached_property
    def _lex_rank(self) -> np.ndarray:
        """lex_rank[ordinal] = position of doc_id in sorted id order."""
        order = sorted(range(len(self.doc_ids)), key=lambda i: self.doc_ids[i])
        rank = np.empty(len(order), dtype=np.int64)
        rank[order] = np.arange(len(order))
        return rank

    @functools.cached_property
    def _duplicate_groups(self) -> list[np.ndarray]:
        """Groups of ordinals with bitwise-identical nonzero vectors."""
        buckets: dict[bytes, list[int]] = {}
        norms = self.norms
        for i in range(self.n_docs):
            if norms[i] == 0.0:
                continue
            if self.kind == SPARSE:
                s, e = self.matrix.indptr[i], self.matrix.indptr[i + 1]
                key = self.matrix.indices[s:e].tobytes() + b"|" + self.matrix.data[s:e].tobytes()
            else:
                key = self.matrix[i].tobytes()
            buckets.setdefault(key, []).append(i)
        return [np.asarray(g) for g in buckets.values() if len(g) > 1]


def _dot_sparse(a: SparseVector, b: SparseVector) -> float:
    common, ia, ib = np.intersect1d(
        a.indices, b.indices, assume_unique=True, return_indices=True
    )
    if len(common) == 0:
        return 0.0
    prods = a.values[ia].astype(np.float64) * b.values[ib].astype(np.float64)
    total = 0.0
    for p in prods:  # sequential ascending-index summation
        total += p
    return total


def _norm_sparse(a: SparseVector) -> float:
    total = 0.0
    for v in a.values.astype(np.float64):
        total += v * v
    return float(np.sqrt(total))


def cosine_distance(a: Vector, b: Vector) -> float:
    """1 - cos(a, b), clamped to [0, 2].

    Zero-norm inputs are maximally dissimilar (distance 1); bitwise-identical
    nonzero vectors are at distance exactly 0.
    """
    a_sparse = isinstance(a, SparseVector)
    b_sparse = isinstance(b, SparseVector)
    if a_sparse != b_sparse:
        raise ValueError("cannot mix sparse and dense vectors")
    if a_sparse:
        if a.dim != b.dim:
            raise ValueError(f"dimension mismatch: {a.dim} != {b.dim}")
        na, nb = _norm_sparse(a), _norm_sparse(b)
        if na == 0.0 or nb == 0.0:
            return 1.0
        if (
            len(a.indices) == len(b.indices)
            and np.array_equal(a.indices, b.indices)
            and np.array_equal(a.values, b.values)
        ):
            return 0.0
        q = _dot_sparse(a, b) / (na * nb)
    else:
        a = np.asarray(a, dtype=np.float64)
        b = np.asarray(b, dtype=np.float64)
        if a.shape != b.shape:
            raise ValueError(f"dimension mismatch: {a.shape} != {b.shape}")
        na = float(np.sqrt(np.dot(a, a)))
        nb = float(np.sqrt(np.dot(b, b)))
        if na == 0.0 or nb == 0.0:
            return 1.0
        if np.array_equal(a, b):
            return 0.0
        q = float(np.dot(a, b)) / (na * nb)
    return min(max(1.0 - q, 0.0), 2.0)


@dataclass(frozen=True)
class NeighborIndex:
    """Precomputed exact kNN lists for one space.

    Lists are ascending by float32 distance, ties by doc_id lexicographic
    order, self excluded; every list has length min(k, n_docs - 1).
    """

    space: str
    k: int
    doc_ids: tuple[str, ...]
    ordinals: np.ndarray  # int32 (n, k)
    distances: np.ndarray  # float32 (n, k)

    def neighbors(self, ordinal: int, n: Optional[int] = None) -> list[tuple[str, float]]:
        n = self.k if n is None else n
        return [
            (self.doc_ids[o], float(d))
            for o, d in zip(
                self.ordinals[ordinal, :n].tolist(),
                self.distances[ordinal, :n].tolist(),
            )
        ]


def _distance_block(space: VectorSpace, start: int, stop: int, transposed) -> np.ndarray:
    """float32 distances from rows [start, stop) to every document."""
    norms = space.norms
    safe = np.where(norms == 0.0, 1.0, norms)
    if space.kind == SPARSE:
        dots = (space._matrix64[start:stop] @ transposed).toarray()
    else:
        dots = space._matrix64[start:stop] @ transposed
    q = dots / (safe[start:stop, None] * safe[None, :])
    d = 1.0 - q
    np.clip(d, 0.0, 2.0, out=d)
    return d.astype(np.float32)


def _select_row(d: np.ndarray, k: int, lex_rank: np.ndarray) -> np.ndarray:
    """Ordinals of the k smallest entries by (distance, doc_id lex order)."""
    n = len(d)
    if k >= n - 1:
        cand = np.flatnonzero(d < np.inf)
        order = np.lexsort((lex_rank[cand], d[cand]))
        return cand[order[:k]]
    part = np.argpartition(d, k - 1)[:k]
    dmax = d[part].max()
    strict = np.flatnonzero(d < dmax)
    order = np.lexsort((lex_rank[strict], d[strict]))
    strict = strict[order]
    need = k - len(strict)
    ties = np.flatnonzero(d == dmax)
    if len(ties) > need:
        keep = np.argpartition(lex_rank[ties], need - 1)[:need]
        ties = ties[keep]
    ties = ties[np.argsort(lex_rank[ties])]
    return np.concatenate([strict, ties[:need]])


def build_neighbor_index(space: VectorSpace, k: int, block_size: int = 512) -> NeighborIndex:
    """Exact kNN under the space's cosine distance, never approximate."""
    if k < 1:
        raise ValueError("k must be >= 1")
    n = space.n_docs
    k_eff = min(k, n - 1)
    lex_rank = space._lex_rank
    ordinals = np.empty((n, k_eff), dtype=np.int32)
    distances = np.empty((n, k_eff), dtype=np.float32)

    dup_of: dict[int, np.ndarray] = {}
    for group in space._duplicate_groups:
        for i in group.tolist():
            dup_of[i] = group

    transposed = (
        space._matrix64.T.tocsr() if space.kind == SPARSE else space._matrix64.T
    )
    for start in range(0, n, block_size):
        stop = min(start + block_size, n)
        block = _distance_block(space, start, stop, transposed)
        for i in range(start, stop):
            row = block[i - start]
            group = dup_of.get(i)
            if group is not None:
                row[group] = 0.0
            row[i] = np.inf
            chosen = _select_row(row, k_eff, lex_rank)
            ordinals[i] = chosen
            distances[i] = row[chosen]
    return NeighborIndex(space.name, k_eff, space.doc_ids, ordinals, distances)


def query_neighbors(bundle, doc_id: str, space: str = "tfidf", n: int = 10) -> list[tuple[str, float]]:
    """First n entries of the precomputed neighbor list."""
    index = bundle.neighbor_indices.get(space)
    if index is None:
        raise UnknownSpaceError(f"no neighbor index for space {space!r}", field="space")
    ordinal = bundle.ordinal(doc_id)
    if n > index.k:
        raise ConfigMismatchError(
            f"n={n} exceeds precomputed k={index.k} for space {space!r}", field="n"
        )
    if n < 0:
        raise ValueError("n must be >= 0")
    return index.neighbors(ordinal, n)


def similarity_for_text(bundle, text: str, space: str = "tfidf", n: int = 10) -> list[tuple[str, float]]:
    """Brute-force top-n most similar documents to pasted text.

    Only sparse spaces support this: the engine cannot embed new text into
    an imported dense space.
    """
    vspace = bundle.spaces.get(space)
    if vspace is None:
        raise UnknownSpaceError(f"unknown space {space!r}", field="space")
    if vspace.kind != SPARSE:
        raise UnsupportedOperationError(
            f"space {space!r} holds imported embeddings; new text cannot be"
            " embedded, use the sparse tf-idf space",
            field="space",
        )
    from .ingest import tokenize_and_stem, vectorize_query_text

    tokenized = tokenize_and_stem(text, bundle.options, doc_id="<query>")
    query = vectorize_query_text(tokenized.stem_counts, bundle.vocabulary)
    if query.nnz == 0:
        log.warning("similarity query has no in-vocabulary stems")
        return []
    qnorm = _norm_sparse(query)
    q64 = np.zeros(vspace.dim)
    q64[query.indices] = query.values.astype(np.float64)
    dots = vspace._matrix64 @ q64
    safe = np.where(vspace.norms == 0.0, 1.0, vspace.norms)
    d = 1.0 - dots / (safe * qnorm)
    np.clip(d, 0.0, 2.0, out=d)
    d32 = d.astype(np.float32)
    order = np.lexsort((vspace._lex_rank, d32))[:n]
    return [(vspace.doc_ids[i], float(d32[i])) for i in order.tolist()]


def import_embedding_space(path, name: str, bundle) -> VectorSpace:
    """Read an externally computed dense space, rows aligned to the bundle."""
    from .bundle_io import read_dense_vectors

    rows = read_dense_vectors(path)
    return dense_space_from_rows(rows, name, bundle.doc_ids, source=str(path))


def add_embedding_space(bundle, name: str, path, k: Optional[int] = None):
    """New bundle with the imported space registered and its kNN index built."""
    import dataclasses

    if name in bundle.spaces:
        raise BundleError(f"space {name!r} already exists", field="name")
    space = import_embedding_space(path, name, bundle)
    k = k if k is not None else (bundle.options.knn_k if bundle.options else 100)
    index = build_neighbor_index(space, k)
    return dataclasses.replace(
        bundle,
        spaces={**bundle.spaces, name: space},
        neighbor_indices={**bundle.neighbor_indices, name: index},
    )


def dense_space_from_rows(
    rows: dict[str, np.ndarray], name: str, doc_ids: Sequence[str], source: str = ""
) -> VectorSpace:
    where = f" in {source}" if source else ""
    dim = None
    for doc_id, vec in rows.items():
        if dim is None:
            dim = len(vec)
        elif len(vec) != dim:
            raise BundleError(
                f"dimension inconsistency{where}: row {doc_id!r} has {len(vec)}"
                f" components, expected {dim}"
            )
        if not np.all(np.isfinite(vec)):
            raise BundleError(f"non-finite value{where} in row {doc_id!r}")
        if not np.any(vec):
            raise BundleError(f"all-zero vector{where} for doc_id={doc_id!r}")
    missing = [d for d in doc_ids if d not in rows]
    if missing:
        raise BundleError(f"embedding file{where} missing doc_id={missing[0]!r}")
    extra = set(rows) - set(doc_ids)
    if extra:
        raise BundleError(f"embedding file{where} has unknown doc_id={sorted(extra)[0]!r}")
    matrix = np.vstack([rows[d] for d in doc_ids]).astype(np.float32)
    return VectorSpace(name, DENSE, tuple(doc_ids), matrix)


@dataclass(frozen=True)
class OverlapStats:
    """Overlap of probe-list prefixes with a fixed reference list."""

    reference_length: int
    probe_lengths: tuple[int, ...]
    mean_overlap: tuple[float, ...]


def list_overlap(
    reference: Sequence[str], probe: Sequence[str], probe_lengths: Sequence[int]
) -> OverlapStats:
    """|reference ∩ probe[:L]| for each probe length L; lists duplicate-free."""
    ref = set(reference)
    counts = []
    for length in probe_lengths:
        counts.append(float(len(ref.intersection(probe[:length]))))
    return OverlapStats(len(reference), tuple(probe_lengths), tuple(counts))


def corpus_overlap_curve(
    bundle,
    reference_space: str,
    probe_space: str,
    reference_n: int = 10,
    probe_lengths: Sequence[int] = (1, 2, 5, 10, 20, 50, 100),
) -> OverlapStats:
    """Mean per-document overlap between two spaces' neighbor lists."""
    ref_index = bundle.neighbor_indices.get(reference_space)
    probe_index = bundle.neighbor_indices.get(probe_space)
    if ref_index is None:
        raise UnknownSpaceError(f"no neighbor index for space {reference_space!r}")
    if probe_index is None:
        raise UnknownSpaceError(f"no neighbor index for space {probe_space!r}")
    reference_n = min(reference_n, ref_index.k)
    lengths = tuple(min(length, probe_index.k) for length in probe_lengths)
    totals = np.zeros(len(lengths))
    n = bundle.n_g
    for ordinal in range(n):
        ref = ref_index.ordinals[ordinal, :reference_n]
        probe = probe_index.ordinals[ordinal]
        hits = np.isin(probe, ref)
        prefix = np.cumsum(hits)
        for j, length in enumerate(lengths):
            totals[j] += prefix[length - 1] if length > 0 else 0
    means = tuple((totals / n).tolist())
    return OverlapStats(reference_n, lengths, means)
