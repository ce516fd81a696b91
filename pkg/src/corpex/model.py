"""Immutable domain types shared by every other module.

A CorpusBundle and everything inside it is frozen after construction, which
makes all query paths safe for unrestricted concurrent reads.
"""

from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterator, Mapping, NamedTuple, Optional, TYPE_CHECKING

import numpy as np

if TYPE_CHECKING:  # pragma: no cover - import cycle guards for typing only
    from .ingest import IngestOptions
    from .layout import LayoutCoordinates
    from .search import SearchIndex
    from .spaces import NeighborIndex, VectorSpace


@dataclass(frozen=True)
class DocumentRecord:
    """One short text with a caller-supplied stable identifier."""

    doc_id: str
    title: str
    body: str
    year: Optional[int] = None
    venue: Optional[str] = None
    authors: Optional[tuple[str, ...]] = None


class Token(NamedTuple):
    surface: str
    start: int
    end: int
    stem: Optional[str]  # None for stopwords, numbers, and too-short tokens


@dataclass(frozen=True)
class TokenizedDocument:
    """Token stream over a document body with exact character spans.

    Surfaces are not stored: spans index into ``text`` (the body string the
    document was tokenized from), so ``text[start:end]`` reconstructs each
    surface form exactly.
    """

    doc_id: str
    text: str
    starts: np.ndarray  # int32, ascending
    ends: np.ndarray  # int32, ends[i] > starts[i], non-overlapping
    stems: tuple[Optional[str], ...]
    stem_counts: Mapping[str, int]

    def __len__(self) -> int:
        return len(self.stems)

    def tokens(self) -> Iterator[Token]:
        for start, end, stem in zip(self.starts.tolist(), self.ends.tolist(), self.stems):
            yield Token(self.text[start:end], start, end, stem)

    def spans_of_stem(self, stem: str) -> list[tuple[int, int]]:
        return [
            (int(s), int(e))
            for s, e, st in zip(self.starts, self.ends, self.stems)
            if st == stem
        ]

    @staticmethod
    def from_tokens(doc_id: str, text: str, tokens: list[Token]) -> "TokenizedDocument":
        starts = np.asarray([t.start for t in tokens], dtype=np.int32)
        ends = np.asarray([t.end for t in tokens], dtype=np.int32)
        stems = tuple(t.stem for t in tokens)
        counts = Counter(s for s in stems if s is not None)
        return TokenizedDocument(doc_id, text, starts, ends, stems, dict(counts))


@dataclass(frozen=True)
class Vocabulary:
    """Bijection between stems and integer term ids plus global df counts.

    Term ids are assigned in lexicographic stem order, so id order doubles as
    the tie-break order for term rankings and makes vocabularies independent
    of document ingestion order.
    """

    terms: tuple[str, ...]  # id -> stem, lexicographically sorted
    df_g: np.ndarray  # int64 per term id, 1 <= df_g <= n_g
    n_g: int

    def __len__(self) -> int:
        return len(self.terms)

    @functools.cached_property
    def term_ids(self) -> dict[str, int]:
        return {t: i for i, t in enumerate(self.terms)}

    def id_of(self, stem: str) -> Optional[int]:
        return self.term_ids.get(stem)

    def df(self, stem: str) -> int:
        i = self.term_ids.get(stem)
        return int(self.df_g[i]) if i is not None else 0

    @functools.cached_property
    def idf(self) -> np.ndarray:
        """ln(n_g / df_g) + 1 per term id; strictly positive since df_g >= 1."""
        return np.log(self.n_g / self.df_g.astype(np.float64)) + 1.0


@dataclass(frozen=True)
class CorpusBundle:
    """Fully precomputed corpus: the single immutable input of every query."""

    name: str
    documents: tuple[DocumentRecord, ...]
    tokenized: tuple[TokenizedDocument, ...]
    vocabulary: Vocabulary
    spaces: Mapping[str, "VectorSpace"]
    neighbor_indices: Mapping[str, "NeighborIndex"]
    layout: "LayoutCoordinates"
    search_index: "SearchIndex"
    options: Optional["IngestOptions"] = None
    manifest: Mapping[str, object] = field(default_factory=dict)

    @functools.cached_property
    def ordinal_of(self) -> dict[str, int]:
        return {d.doc_id: i for i, d in enumerate(self.documents)}

    @functools.cached_property
    def doc_ids(self) -> tuple[str, ...]:
        return tuple(d.doc_id for d in self.documents)

    @property
    def n_g(self) -> int:
        return len(self.documents)

    def document(self, doc_id: str) -> DocumentRecord:
        from .errors import UnknownDocumentError

        ordinal = self.ordinal_of.get(doc_id)
        if ordinal is None:
            raise UnknownDocumentError(f"unknown doc_id: {doc_id!r}", field="doc_id")
        return self.documents[ordinal]

    def ordinal(self, doc_id: str) -> int:
        from .errors import UnknownDocumentError

        ordinal = self.ordinal_of.get(doc_id)
        if ordinal is None:
            raise UnknownDocumentError(f"unknown doc_id: {doc_id!r}", field="doc_id")
        return ordinal


def validate_bundle(bundle: CorpusBundle) -> list[str]:
    """Check every cross-structure invariant; violations are data, not errors.

    Returns one human-readable message per failed invariant, empty when the
    bundle is internally consistent.
    """
    violations: list[str] = []
    ids = [d.doc_id for d in bundle.documents]
    id_set = set(ids)
    n = len(ids)

    if len(id_set) != n:
        seen: set[str] = set()
        for doc_id in ids:
            if doc_id in seen:
                violations.append(f"duplicate doc_id={doc_id}")
            seen.add(doc_id)

    for doc in bundle.documents:
        if not doc.body.strip():
            violations.append(f"empty body for doc_id={doc.doc_id}")

    if len(bundle.tokenized) != n:
        violations.append(
            f"tokenized covers {len(bundle.tokenized)} documents, expected {n}"
        )
    else:
        for doc, tok in zip(bundle.documents, bundle.tokenized):
            if tok.doc_id != doc.doc_id:
                violations.append(
                    f"tokenized order mismatch: expected {doc.doc_id}, got {tok.doc_id}"
                )

    vocab = bundle.vocabulary
    if vocab.n_g != n:
        violations.append(f"vocabulary n_g={vocab.n_g}, expected {n}")

    # Exact df recount by full rescan of the tokenized documents.
    recount: Counter[str] = Counter()
    for tok in bundle.tokenized:
        recount.update(set(tok.stem_counts))
    if set(recount) != set(vocab.terms):
        for stem in sorted(set(recount) - set(vocab.terms)):
            violations.append(f"stem {stem!r} present in documents but not in vocabulary")
        for stem in sorted(set(vocab.terms) - set(recount)):
            violations.append(f"vocabulary stem {stem!r} appears in no document")
    for term_id, stem in enumerate(vocab.terms):
        expected = recount.get(stem, 0)
        actual = int(vocab.df_g[term_id])
        if expected != actual and expected > 0:
            violations.append(
                f"df_g[{stem!r}]={actual} but {expected} documents contain it"
            )
        if not (1 <= actual <= vocab.n_g):
            violations.append(f"df_g[{stem!r}]={actual} outside [1, n_g={vocab.n_g}]")

    for name, space in bundle.spaces.items():
        space_ids = list(space.doc_ids)
        if space_ids != ids:
            missing = id_set - set(space_ids)
            extra = set(space_ids) - id_set
            for doc_id in sorted(missing):
                violations.append(f"space {name!r} missing doc_id={doc_id}")
            for doc_id in sorted(extra):
                violations.append(f"space {name!r} has unknown doc_id={doc_id}")
            if not missing and not extra:
                violations.append(f"space {name!r} row order differs from documents")

    for name, index in bundle.neighbor_indices.items():
        if name not in bundle.spaces:
            violations.append(f"neighbor index {name!r} has no matching space")
        if index.ordinals.shape[0] != n:
            violations.append(
                f"neighbor index {name!r} covers {index.ordinals.shape[0]} documents, expected {n}"
            )
            continue
        expected_len = min(index.k, n - 1)
        if index.ordinals.shape[1] != expected_len:
            violations.append(
                f"neighbor index {name!r} lists have length {index.ordinals.shape[1]},"
                f" expected min(k, n_g-1)={expected_len}"
            )
        if np.any(index.ordinals == np.arange(n, dtype=index.ordinals.dtype)[:, None]):
            violations.append(f"neighbor index {name!r} contains self neighbors")
        if np.any(np.diff(index.distances.astype(np.float64), axis=1) < 0):
            violations.append(f"neighbor index {name!r} distances not ascending")

    layout_ids = list(bundle.layout.doc_ids)
    if layout_ids != ids:
        for doc_id in sorted(id_set - set(layout_ids)):
            violations.append(f"layout missing doc_id={doc_id}")
        for doc_id in sorted(set(layout_ids) - id_set):
            violations.append(f"layout has unknown doc_id={doc_id}")
    if not np.all(np.isfinite(bundle.layout.coords)):
        violations.append("layout contains non-finite coordinates")

    return violations
