import numpy as np
import pytest
import scipy.sparse as sp

from corpex.ingest import IngestOptions, build_bundle
from corpex.model import DocumentRecord
from corpex.spaces import DENSE, SPARSE, VectorSpace


TOY_BODIES = [
    "Robots and robotics for humans. Planning motion with robots in factories.",
    "Humans teach robots by demonstration. Robot planning and learning systems.",
    "Visualization of text corpora and exploration tools for researchers.",
    "Corpus exploration with spatial maps, salient terms and visualization.",
    "Haptic feedback devices for teleoperation of remote robot arms.",
    "Grasping with robot hands using tactile sensing and machine learning.",
    "Machine learning on text with term weighting and document vectors.",
    "Exploration of document collections through keyword search and maps.",
]


def toy_records():
    return [
        DocumentRecord(
            doc_id=f"d{i}",
            title=f"Toy document {i}",
            body=body,
            year=2015 + i if i != 5 else None,
            venue="venue-a" if i % 2 == 0 else "venue-b",
        )
        for i, body in enumerate(TOY_BODIES)
    ]


@pytest.fixture(scope="session")
def toy_bundle():
    opts = IngestOptions(knn_k=4, grid_bins=4)
    return build_bundle(toy_records(), opts, name="toy")


def synthetic_words(count: int) -> list[str]:
    # letter+digits+letter keeps tokens stemmer-stable and non-stopword
    return [f"w{i}x" for i in range(count)]


def synthetic_records(rng: np.random.Generator, n_docs: int, vocab_size: int = 80,
                      min_tokens: int = 15, max_tokens: int = 50) -> list[DocumentRecord]:
    words = synthetic_words(vocab_size)
    weights = 1.0 / np.arange(1, vocab_size + 1)  # zipf-ish reuse of common words
    weights /= weights.sum()
    records = []
    width = len(str(n_docs))
    for i in range(n_docs):
        n_tokens = int(rng.integers(min_tokens, max_tokens + 1))
        chosen = rng.choice(vocab_size, size=n_tokens, p=weights)
        body = " ".join(words[w] for w in chosen)
        records.append(DocumentRecord(f"d{i:0{width}d}", f"synthetic {i}", body))
    return records


def random_sparse_space(rng: np.random.Generator, n_docs: int, dim: int = 300,
                        min_nnz: int = 5, max_nnz: int = 50,
                        shuffle_ids: bool = True) -> VectorSpace:
    """Random positive sparse vectors; doc order deliberately not id order."""
    indptr = np.zeros(n_docs + 1, dtype=np.int64)
    indices_parts, data_parts = [], []
    for i in range(n_docs):
        nnz = min(int(rng.integers(min_nnz, max_nnz + 1)), dim)
        idx = np.sort(rng.choice(dim, size=nnz, replace=False)).astype(np.int32)
        vals = rng.uniform(0.25, 5.0, size=nnz).astype(np.float32)
        indices_parts.append(idx)
        data_parts.append(vals)
        indptr[i + 1] = indptr[i] + nnz
    matrix = sp.csr_matrix(
        (np.concatenate(data_parts), np.concatenate(indices_parts), indptr),
        shape=(n_docs, dim),
    )
    ids = [f"doc{i:05d}" for i in range(n_docs)]
    if shuffle_ids:
        rng.shuffle(ids)
    return VectorSpace("rand", SPARSE, tuple(ids), matrix)


def random_dense_space(rng: np.random.Generator, n_docs: int, dim: int = 16) -> VectorSpace:
    matrix = rng.normal(size=(n_docs, dim)).astype(np.float32)
    ids = [f"doc{i:05d}" for i in range(n_docs)]
    rng.shuffle(ids)
    return VectorSpace("dense", DENSE, tuple(ids), matrix)


def space_as_dicts(space: VectorSpace) -> dict:
    """Vectors keyed by doc_id for the oracles (plain python containers)."""
    out = {}
    for ordinal, doc_id in enumerate(space.doc_ids):
        if space.kind == SPARSE:
            start, end = space.matrix.indptr[ordinal], space.matrix.indptr[ordinal + 1]
            out[doc_id] = {
                int(t): float(v)
                for t, v in zip(
                    space.matrix.indices[start:end], space.matrix.data[start:end]
                )
            }
        else:
            out[doc_id] = [float(v) for v in space.matrix[ordinal]]
    return out
