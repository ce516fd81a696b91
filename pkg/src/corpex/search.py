"""Native full-text keyword search over stems with BM25 relevance.

The index covers title and body stems; highlight spans are character ranges
into the body only, because the body is what the document view renders.
Queries are bare whitespace-separated terms with all-terms / any-term
matching; no phrase or boolean grammar.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .errors import EmptyQueryError
from .model import CorpusBundle, DocumentRecord, TokenizedDocument
from .spaces import cosine_distance

BM25_K1 = 1.2
BM25_B = 0.75

MODE_ALL = "all"
MODE_ANY = "any"
_MODE_ALIASES = {"all": MODE_ALL, "all-terms": MODE_ALL, "any": MODE_ANY, "any-term": MODE_ANY}


@dataclass(frozen=True)
class Posting:
    """Documents containing one stem, with body highlight spans."""

    ordinals: np.ndarray  # int32 ascending
    tfs: np.ndarray  # int32, title+body occurrences
    span_offsets: np.ndarray  # int64, len(ordinals)+1
    span_starts: np.ndarray  # int32, body character spans
    span_ends: np.ndarray

    def spans_for(self, position: int) -> tuple[tuple[int, int], ...]:
        lo, hi = self.span_offsets[position], self.span_offsets[position + 1]
        return tuple(
            zip(self.span_starts[lo:hi].tolist(), self.span_ends[lo:hi].tolist())
        )


_EMPTY_POSTING = Posting(
    np.empty(0, dtype=np.int32),
    np.empty(0, dtype=np.int32),
    np.zeros(1, dtype=np.int64),
    np.empty(0, dtype=np.int32),
    np.empty(0, dtype=np.int32),
)


@dataclass(frozen=True)
class SearchIndex:
    doc_ids: tuple[str, ...]
    postings: dict[str, Posting]
    doc_lengths: np.ndarray  # int64, stemmed token count of title+body
    avgdl: float
    stopword_list: frozenset[str]
    min_token_length: int

    @property
    def n_docs(self) -> int:
        return len(self.doc_ids)

    def df(self, stem: str) -> int:
        posting = self.postings.get(stem)
        return len(posting.ordinals) if posting is not None else 0

    @functools.cached_property
    def _lex_rank(self) -> np.ndarray:
        order = sorted(range(self.n_docs), key=lambda i: self.doc_ids[i])
        rank = np.empty(self.n_docs, dtype=np.int64)
        rank[order] = np.arange(self.n_docs)
        return rank


@dataclass(frozen=True)
class SearchHit:
    doc_id: str
    score: float
    matched_spans: dict[str, tuple[tuple[int, int], ...]]  # query stem -> body spans


def index_from_components(
    documents: Sequence[DocumentRecord],
    tokenized: Sequence[TokenizedDocument],
    opts,
) -> SearchIndex:
    from .ingest import tokenize_and_stem

    acc: dict[str, dict[int, tuple[int, list[int], list[int]]]] = {}
    doc_lengths = np.zeros(len(documents), dtype=np.int64)
    for ordinal, (doc, tok) in enumerate(zip(documents, tokenized)):
        per_stem: dict[str, tuple[int, list[int], list[int]]] = {}
        for start, end, stem in zip(tok.starts.tolist(), tok.ends.tolist(), tok.stems):
            if stem is None:
                continue
            tf, starts, ends = per_stem.setdefault(stem, (0, [], []))
            starts.append(start)
            ends.append(end)
            per_stem[stem] = (tf + 1, starts, ends)
        if doc.title.strip():
            title_tok = tokenize_and_stem(doc.title, opts, doc.doc_id)
            for stem in title_tok.stems:
                if stem is None:
                    continue
                tf, starts, ends = per_stem.setdefault(stem, (0, [], []))
                per_stem[stem] = (tf + 1, starts, ends)
        doc_lengths[ordinal] = sum(tf for tf, _, _ in per_stem.values())
        for stem, entry in per_stem.items():
            acc.setdefault(stem, {})[ordinal] = entry

    postings: dict[str, Posting] = {}
    for stem in sorted(acc):
        by_doc = acc[stem]
        ordinals = np.asarray(sorted(by_doc), dtype=np.int32)
        tfs = np.asarray([by_doc[o][0] for o in ordinals.tolist()], dtype=np.int32)
        offsets = np.zeros(len(ordinals) + 1, dtype=np.int64)
        starts_parts, ends_parts = [], []
        for pos, o in enumerate(ordinals.tolist()):
            _, starts, ends = by_doc[o]
            offsets[pos + 1] = offsets[pos] + len(starts)
            starts_parts.extend(starts)
            ends_parts.extend(ends)
        postings[stem] = Posting(
            ordinals,
            tfs,
            offsets,
            np.asarray(starts_parts, dtype=np.int32),
            np.asarray(ends_parts, dtype=np.int32),
        )
    avgdl = float(doc_lengths.mean()) if len(doc_lengths) else 0.0
    return SearchIndex(
        doc_ids=tuple(d.doc_id for d in documents),
        postings=postings,
        doc_lengths=doc_lengths,
        avgdl=avgdl if avgdl > 0 else 1.0,
        stopword_list=opts.stopword_list,
        min_token_length=opts.min_token_length,
    )


def build_search_index(bundle: CorpusBundle) -> SearchIndex:
    return index_from_components(bundle.documents, bundle.tokenized, bundle.options)


def query_stems(index: SearchIndex, query: str) -> list[str]:
    """Stems of the query terms, deduplicated, stopwords and numbers removed."""
    from .ingest import IngestOptions, tokenize_and_stem

    if not query.strip():
        return []
    opts = IngestOptions(
        stopword_list=index.stopword_list, min_token_length=index.min_token_length
    )
    tok = tokenize_and_stem(query, opts, "<query>")
    seen: list[str] = []
    for stem in tok.stems:
        if stem is not None and stem not in seen:
            seen.append(stem)
    return seen


def _bm25_idf(n_docs: int, df: int) -> float:
    return math.log(1.0 + (n_docs - df + 0.5) / (df + 0.5))


def keyword_search(
    index: SearchIndex, query: str, mode: str = MODE_ANY, top_n: Optional[int] = None
) -> list[SearchHit]:
    """BM25-ranked hits (k1=1.2, b=0.75), ties broken by doc_id."""
    if mode not in _MODE_ALIASES:
        raise ValueError(f"unknown mode {mode!r}; expected all-terms or any-term")
    mode = _MODE_ALIASES[mode]
    stems = query_stems(index, query)
    if not stems:
        raise EmptyQueryError(f"query {query!r} has no searchable terms", field="q")

    posting_by_stem = {s: index.postings.get(s, _EMPTY_POSTING) for s in stems}
    ordinal_sets = [p.ordinals for p in posting_by_stem.values()]
    if mode == MODE_ALL:
        hits = ordinal_sets[0]
        for arr in ordinal_sets[1:]:
            hits = np.intersect1d(hits, arr, assume_unique=True)
    else:
        hits = ordinal_sets[0]
        for arr in ordinal_sets[1:]:
            hits = np.union1d(hits, arr)
    if len(hits) == 0:
        return []

    scores = np.zeros(len(hits))
    dl_norm = BM25_K1 * (1.0 - BM25_B + BM25_B * index.doc_lengths[hits] / index.avgdl)
    for stem, posting in posting_by_stem.items():
        if len(posting.ordinals) == 0:
            continue
        positions = np.searchsorted(hits, posting.ordinals)
        mask = (positions < len(hits)) & (hits[np.minimum(positions, len(hits) - 1)] == posting.ordinals)
        positions = positions[mask]
        tf = posting.tfs[mask].astype(np.float64)
        idf = _bm25_idf(index.n_docs, len(posting.ordinals))
        scores[positions] += idf * tf * (BM25_K1 + 1.0) / (tf + dl_norm[positions])

    order = np.lexsort((index._lex_rank[hits], -scores))
    if top_n is not None:
        order = order[:top_n]

    results = []
    for pos in order.tolist():
        ordinal = int(hits[pos])
        spans: dict[str, tuple[tuple[int, int], ...]] = {}
        for stem, posting in posting_by_stem.items():
            loc = np.searchsorted(posting.ordinals, ordinal)
            if loc < len(posting.ordinals) and posting.ordinals[loc] == ordinal:
                spans[stem] = posting.spans_for(int(loc))
        results.append(SearchHit(index.doc_ids[ordinal], float(scores[pos]), spans))
    return results


ORDER_RELEVANCE = "relevance"
ORDER_DISTANCE = "distance"
ORDER_YEAR = "year"


def sort_hits(
    hits: list[SearchHit],
    order: str,
    *,
    bundle: Optional[CorpusBundle] = None,
    anchor: Optional[str] = None,
    space: str = "tfidf",
) -> list[SearchHit]:
    """Stable re-sort of a hit list; equal keys keep their incoming order."""
    if order == ORDER_RELEVANCE:
        return sorted(hits, key=lambda h: -h.score)
    if order == ORDER_DISTANCE:
        if bundle is None or anchor is None:
            raise ValueError("distance ordering requires a bundle and an anchor document")
        vspace = bundle.spaces.get(space)
        if vspace is None:
            raise ValueError(f"unknown space {space!r}")
        anchor_vec = vspace.vector(bundle.ordinal(anchor))
        def dist(hit: SearchHit) -> float:
            return float(
                np.float32(cosine_distance(anchor_vec, vspace.vector(bundle.ordinal(hit.doc_id))))
            )
        return sorted(hits, key=dist)
    if order == ORDER_YEAR:
        if bundle is None:
            raise ValueError("year ordering requires a bundle for metadata")
        def year_key(hit: SearchHit):
            year = bundle.document(hit.doc_id).year
            return (year is None, -(year or 0))  # undated last, newest first
        return sorted(hits, key=year_key)
    raise ValueError(f"unknown sort order {order!r}; expected relevance, distance, or year")
