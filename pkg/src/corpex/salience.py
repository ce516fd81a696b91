"""Term and document salience: scores that explain arbitrary document sets.

All term metrics share one vocabulary of counts: df_r and n_r for the set
being explained, df_g and n_g for the whole corpus. Scoring document
frequencies (not token frequencies) keeps the metrics interchangeable in the
matrix views. Rankings are deterministic: ties always break lexicographically
on the item id.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import UnknownMetricError
from .layout import HeatmapGrid, RegionSelection, fill_cell_terms
from .model import CorpusBundle, Vocabulary
from .spaces import cosine_distance

TERM_METRICS = ("g2", "uniqueness", "differential", "descriptive")
DOC_METRICS = ("similarity", "centrality", "occurrence", "relevance")
TIE_BREAK = "lexicographic"


@dataclass(frozen=True)
class RegionTermStats:
    """Per-term in-region document frequencies against the corpus vocabulary."""

    df_r: np.ndarray  # int64 per term id, 0 <= df_r <= min(df_g, n_r)
    n_r: int
    vocabulary: Vocabulary

    def df_r_of(self, stem: str) -> int:
        term_id = self.vocabulary.id_of(stem)
        return int(self.df_r[term_id]) if term_id is not None else 0


@dataclass(frozen=True)
class SalienceRanking:
    metric: str
    items: tuple[tuple[str, float], ...]  # (term or doc_id, score), scores non-increasing
    tie_break: str = TIE_BREAK

    def ids(self) -> tuple[str, ...]:
        return tuple(item for item, _ in self.items)


def _stats_from_ordinals(bundle: CorpusBundle, ordinals: np.ndarray, n_r: int) -> RegionTermStats:
    matrix = bundle.spaces["tfidf"].matrix
    vocab_size = len(bundle.vocabulary)
    if len(ordinals) == 0:
        return RegionTermStats(np.zeros(vocab_size, dtype=np.int64), n_r, bundle.vocabulary)
    parts = [
        matrix.indices[matrix.indptr[o] : matrix.indptr[o + 1]]
        for o in ordinals.tolist()
    ]
    flat = np.concatenate(parts) if parts else np.empty(0, dtype=np.int32)
    df_r = np.bincount(flat, minlength=vocab_size).astype(np.int64)
    return RegionTermStats(df_r, n_r, bundle.vocabulary)


def region_term_stats(bundle: CorpusBundle, region: RegionSelection) -> RegionTermStats:
    """Exact df_r by scanning the member documents."""
    return _stats_from_ordinals(bundle, region.ordinals, region.n_r)


def _g2_terms(observed: np.ndarray, expected: np.ndarray) -> np.ndarray:
    out = np.zeros_like(expected)
    mask = observed > 0
    out[mask] = observed[mask] * np.log(observed[mask] / expected[mask])
    return out


def g2_scores(df_r: np.ndarray, n_r: int, df_g: np.ndarray, n_g: int) -> np.ndarray:
    """Log-likelihood ratio of the 2x2 document-frequency table per term.

    Contingency table rows are (in region, out of region), columns are
    (contains term, lacks term); 0*ln(0/E) is 0 by convention. Zero exactly
    when in-region and out-of-region proportions agree.
    """
    a = df_r.astype(np.float64)
    b = float(n_r) - a
    c = df_g.astype(np.float64) - a
    d = float(n_g - n_r) - c
    col1 = df_g.astype(np.float64)
    col2 = float(n_g) - col1
    ea = n_r * col1 / n_g
    eb = n_r * col2 / n_g
    ec = (n_g - n_r) * col1 / n_g
    ed = (n_g - n_r) * col2 / n_g
    total = (
        _g2_terms(a, ea) + _g2_terms(b, eb) + _g2_terms(c, ec) + _g2_terms(d, ed)
    )
    return 2.0 * total


def g2_statistic(df_r: int, n_r: int, df_g: int, n_g: int) -> float:
    """Scalar convenience wrapper over g2_scores."""
    return float(g2_scores(np.asarray([df_r]), n_r, np.asarray([df_g]), n_g)[0])


def differential_scores(
    df_r: np.ndarray, n_r: int, df_g: np.ndarray, n_g: int, kappa: float
) -> np.ndarray:
    """df_r/n_r - kappa*(df_g-df_r)/(n_g-n_r); the contrast term is 0 when the
    region is the whole corpus (where the formula would divide by zero)."""
    coverage = df_r.astype(np.float64) / n_r
    if n_r == n_g:
        return coverage
    contrast = (df_g.astype(np.float64) - df_r.astype(np.float64)) / (n_g - n_r)
    return coverage - kappa * contrast


def term_salience(
    stats: RegionTermStats,
    metric: str = "g2",
    top_n: int = 30,
    kappa: float = 1.0,
    overrepresented_only: bool = False,
) -> SalienceRanking:
    """Rank the region's terms; terms absent from the region are never ranked."""
    if metric not in TERM_METRICS:
        raise UnknownMetricError(
            f"unknown term metric {metric!r}; expected one of {TERM_METRICS}",
            field="term_metric",
        )
    if kappa <= 0:
        raise ValueError("kappa must be > 0")
    vocab = stats.vocabulary
    n_r, n_g = stats.n_r, vocab.n_g
    candidates = np.flatnonzero(stats.df_r > 0)
    if len(candidates) == 0 or top_n <= 0:
        return SalienceRanking(metric, ())
    df_r = stats.df_r[candidates]
    df_g = vocab.df_g[candidates]

    if metric == "uniqueness":
        scores = df_r.astype(np.float64) / df_g.astype(np.float64)
    elif metric == "descriptive":
        scores = df_r.astype(np.float64) / n_r
    elif metric == "differential":
        scores = differential_scores(df_r, n_r, df_g, n_g, kappa)
    else:
        scores = g2_scores(df_r, n_r, df_g, n_g)
        if overrepresented_only and n_r < n_g:
            inside = df_r.astype(np.float64) / n_r
            outside = (df_g - df_r).astype(np.float64) / (n_g - n_r)
            keep = inside > outside
            candidates, scores = candidates[keep], scores[keep]

    # Term ids are lexicographic by construction, so id order is the tie rule.
    order = np.lexsort((candidates, -scores))[:top_n]
    items = tuple(
        (vocab.terms[candidates[i]], float(scores[i])) for i in order.tolist()
    )
    return SalienceRanking(metric, items)


@dataclass(frozen=True)
class HighlightSpan:
    start: int
    end: int
    stem: str
    intensity: int  # 1 (weak) .. 3 (strong), bucketed by weight quantile


@dataclass(frozen=True)
class PairSalience:
    """Shared-term weights explaining the similarity of a document pair.

    weight(t) is the term's exact contribution to the tf-idf dot product of
    the two documents, so the weights sum to that dot product and are empty
    exactly when the tf-idf cosine similarity is zero.
    """

    a: str
    b: str
    weights: tuple[tuple[str, float], ...]  # descending weight, ties lexicographic
    spans_a: tuple[HighlightSpan, ...]
    spans_b: tuple[HighlightSpan, ...]

    @property
    def total_weight(self) -> float:
        return float(sum(w for _, w in self.weights))


def intensity_buckets(weights: dict[str, float]) -> dict[str, int]:
    if not weights:
        return {}
    values = sorted(weights.values())
    count = len(values)
    mid = values[count // 3]
    high = values[(2 * count) // 3]
    return {
        stem: 3 - (w < high) - (w < mid)
        for stem, w in weights.items()
    }


def _spans_for(bundle: CorpusBundle, ordinal: int, intensity: dict[str, int]) -> tuple[HighlightSpan, ...]:
    tok = bundle.tokenized[ordinal]
    spans = []
    for start, end, stem in zip(tok.starts.tolist(), tok.ends.tolist(), tok.stems):
        if stem is not None and stem in intensity:
            spans.append(HighlightSpan(start, end, stem, intensity[stem]))
    return tuple(spans)


def pair_term_salience(bundle: CorpusBundle, a: str, b: str) -> PairSalience:
    if a == b:
        raise ValueError("pair salience needs two distinct documents")
    ord_a, ord_b = bundle.ordinal(a), bundle.ordinal(b)
    space = bundle.spaces["tfidf"]
    va, vb = space.vector(ord_a), space.vector(ord_b)
    common, ia, ib = np.intersect1d(
        va.indices, vb.indices, assume_unique=True, return_indices=True
    )
    weights = {
        bundle.vocabulary.terms[t]: float(
            np.float64(va.values[i]) * np.float64(vb.values[j])
        )
        for t, i, j in zip(common.tolist(), ia.tolist(), ib.tolist())
    }
    ordered = tuple(sorted(weights.items(), key=lambda kv: (-kv[1], kv[0])))
    intensity = intensity_buckets(weights)
    return PairSalience(
        a,
        b,
        ordered,
        _spans_for(bundle, ord_a, intensity),
        _spans_for(bundle, ord_b, intensity),
    )


def single_doc_term_salience(bundle: CorpusBundle, doc_id: str, top_n: int = 10) -> SalienceRanking:
    """Terms that set one document apart from the rest of the corpus (g2)."""
    ordinal = bundle.ordinal(doc_id)
    stats = _stats_from_ordinals(bundle, np.asarray([ordinal]), 1)
    return term_salience(stats, "g2", top_n)


def doc_salience(
    bundle: CorpusBundle,
    selection: RegionSelection,
    metric: str = "centrality",
    top_n: int = 50,
    *,
    anchor: Optional[str] = None,
    space: str = "tfidf",
    term_ranking: Optional[SalienceRanking] = None,
    hits: Optional[dict[str, float]] = None,
) -> SalienceRanking:
    """Rank the documents of a set as exemplars.

    similarity needs an anchor document (allowed to be outside the set);
    occurrence needs a term ranking; relevance needs search hit scores.
    """
    if metric not in DOC_METRICS:
        raise UnknownMetricError(
            f"unknown doc metric {metric!r}; expected one of {DOC_METRICS}",
            field="doc_metric",
        )
    ordinals = selection.ordinals.tolist()
    doc_ids = [bundle.doc_ids[o] for o in ordinals]

    if metric == "similarity":
        if anchor is None:
            raise ValueError("similarity metric requires an anchor document")
        vspace = bundle.spaces.get(space)
        if vspace is None:
            raise UnknownMetricError(f"unknown space {space!r}", field="space")
        anchor_vec = vspace.vector(bundle.ordinal(anchor))
        scores = []
        for o in ordinals:
            d = float(np.float32(cosine_distance(anchor_vec, vspace.vector(o))))
            scores.append(-d if d != 0.0 else 0.0)
    elif metric == "centrality":
        index = bundle.neighbor_indices.get(space)
        if index is None:
            raise UnknownMetricError(f"no neighbor index for space {space!r}", field="space")
        member_arr = np.asarray(ordinals, dtype=index.ordinals.dtype)
        hits_per_doc = np.isin(index.ordinals[selection.ordinals], member_arr).sum(axis=1)
        scores = [float(h) for h in hits_per_doc.tolist()]
    elif metric == "occurrence":
        if term_ranking is None:
            raise ValueError("occurrence metric requires a term ranking")
        wanted = [bundle.vocabulary.id_of(t) for t in term_ranking.ids()]
        wanted_arr = np.asarray([w for w in wanted if w is not None], dtype=np.int64)
        matrix = bundle.spaces["tfidf"].matrix
        scores = []
        for o in ordinals:
            row = matrix.indices[matrix.indptr[o] : matrix.indptr[o + 1]]
            scores.append(float(np.isin(row, wanted_arr).sum()))
    else:  # relevance
        if hits is None:
            raise ValueError("relevance metric requires search hit scores")
        scores = [float(hits.get(d, 0.0)) for d in doc_ids]

    ranked = sorted(zip(doc_ids, scores), key=lambda kv: (-kv[1], kv[0]))[:top_n]
    return SalienceRanking(metric, tuple((d, s) for d, s in ranked))


def compute_cell_terms(
    bundle: CorpusBundle, grid: HeatmapGrid, metric: str = "g2", top_n: int = 5
) -> HeatmapGrid:
    """Precompute hover terms for every occupied grid cell."""
    terms = {}
    for cell, ordinals in grid.cell_docs.items():
        stats = _stats_from_ordinals(bundle, ordinals, len(ordinals))
        terms[cell] = term_salience(stats, metric, top_n).items
    return fill_cell_terms(grid, terms)
