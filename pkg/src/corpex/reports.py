"""View-ready report assembly, shared verbatim by the HTTP service and CLI.

Each builder returns a plain JSON-serializable dict; `dumps` renders it to
canonical bytes. The CLI writes exactly these bytes and the service returns
exactly these bytes, which is what makes the two surfaces byte-identical.
"""

from __future__ import annotations

import json
from typing import Optional, Sequence

from . import __version__
from .errors import CorpexError, EmptyQueryError, OutOfRangeError, UnknownSpaceError
from .layout import (
    CellRegion,
    ExplicitRegion,
    HeatmapGrid,
    Provenance,
    RectangleRegion,
    RegionSelection,
    bin_layout,
    radial_layout,
    select_region,
)
from .model import CorpusBundle
from .salience import (
    DOC_METRICS,
    TERM_METRICS,
    SalienceRanking,
    intensity_buckets,
    doc_salience,
    pair_term_salience,
    region_term_stats,
    single_doc_term_salience,
    term_salience,
)
from .search import keyword_search, query_stems, sort_hits
from .spaces import query_neighbors

REGION_TOP_TERMS = 30
REGION_TOP_DOCS = 50
NEIGHBORHOOD_TOP_TERMS = 15
DOCUMENT_TOP_TERMS = 10
DEFAULT_NEIGHBORS = 10
DEFAULT_KAPPA = 1.0


def dumps(payload) -> str:
    """Canonical JSON: compact separators, UTF-8 text, insertion-ordered keys."""
    return json.dumps(payload, ensure_ascii=False, separators=(",", ":"), allow_nan=False)


class Explorer:
    """One loaded bundle plus the derived structures views need.

    The grid (with its precomputed hover terms) is deterministic given the
    bundle, so deriving it lazily here keeps the on-disk format minimal
    without giving up bit-identical round trips. Servers warm it up front;
    one-shot CLI paths that never touch cells skip the cost.
    """

    def __init__(self, bundle: CorpusBundle):
        self.bundle = bundle
        self._grid: Optional[HeatmapGrid] = None

    @property
    def grid(self) -> HeatmapGrid:
        if self._grid is None:
            from .salience import compute_cell_terms

            opts = self.bundle.options
            grid = bin_layout(self.bundle.layout, opts.grid_bins)
            self._grid = compute_cell_terms(
                self.bundle, grid, opts.cell_term_metric, opts.cell_term_count
            )
        return self._grid

    def region(self, provenance: Provenance) -> RegionSelection:
        if isinstance(provenance, CellRegion):
            return select_region(self.bundle, provenance, self.grid)
        return select_region(self.bundle, provenance)


def provenance_from_obj(obj: dict) -> Provenance:
    kind = obj.get("kind")
    try:
        if kind == "rectangle":
            return RectangleRegion(
                float(obj["x0"]), float(obj["y0"]), float(obj["x1"]), float(obj["y1"])
            )
        if kind == "cell":
            return CellRegion(int(obj["i"]), int(obj["j"]))
        if kind == "ids":
            ids = obj["doc_ids"]
            if not isinstance(ids, (list, tuple)) or not all(isinstance(d, str) for d in ids):
                raise CorpexError("doc_ids must be a list of strings", field="provenance")
            return ExplicitRegion(tuple(ids))
    except (KeyError, TypeError, ValueError) as exc:
        raise CorpexError(f"malformed provenance: {exc}", field="provenance")
    raise CorpexError(
        f"unknown provenance kind {kind!r}; expected rectangle, cell, or ids",
        field="provenance",
    )


def provenance_from_string(text: str) -> Provenance:
    """Compact form used on GET query strings: cell:i,j rect:x0,y0,x1,y1 ids:a|b."""
    kind, _, rest = text.partition(":")
    try:
        if kind == "cell":
            i, j = rest.split(",")
            return CellRegion(int(i), int(j))
        if kind == "rect":
            x0, y0, x1, y1 = (float(v) for v in rest.split(","))
            return RectangleRegion(x0, y0, x1, y1)
        if kind == "ids":
            ids = tuple(d for d in rest.split("|") if d)
            return ExplicitRegion(ids)
    except ValueError as exc:
        raise CorpexError(f"malformed region {text!r}: {exc}", field="region")
    raise CorpexError(
        f"unknown region form {text!r}; expected cell:i,j rect:x0,y0,x1,y1 or ids:a|b",
        field="region",
    )


def provenance_payload(provenance: Provenance) -> dict:
    if isinstance(provenance, RectangleRegion):
        return {
            "kind": "rectangle",
            "x0": provenance.x0,
            "y0": provenance.y0,
            "x1": provenance.x1,
            "y1": provenance.y1,
        }
    if isinstance(provenance, CellRegion):
        return {"kind": "cell", "i": provenance.i, "j": provenance.j}
    return {"kind": "ids", "doc_ids": list(provenance.doc_ids)}


def _ranking_payload(ranking: SalienceRanking) -> list[dict]:
    return [{"term": term, "score": score} for term, score in ranking.items]


def _doc_summary(bundle: CorpusBundle, doc_id: str) -> dict:
    doc = bundle.document(doc_id)
    return {"doc_id": doc.doc_id, "title": doc.title, "year": doc.year}


def corpus_meta(explorer: Explorer) -> dict:
    bundle = explorer.bundle
    return {
        "name": bundle.name,
        "n_g": bundle.n_g,
        "vocab_size": len(bundle.vocabulary),
        "spaces": [
            {"name": s.name, "kind": s.kind, "dim": int(s.dim)}
            for s in bundle.spaces.values()
        ],
        "grid": {"bins": explorer.grid.bins},
        "defaults": {
            "n": DEFAULT_NEIGHBORS,
            "k": bundle.options.knn_k,
            "kappa": DEFAULT_KAPPA,
        },
        "metrics": {"term": list(TERM_METRICS), "doc": list(DOC_METRICS)},
        "version": __version__,
    }


def region_report(
    explorer: Explorer,
    provenance: Provenance,
    term_metric: str = "g2",
    doc_metric: str = "centrality",
    kappa: float = DEFAULT_KAPPA,
    space: str = "tfidf",
    anchor: Optional[str] = None,
) -> dict:
    bundle = explorer.bundle
    region = explorer.region(provenance)
    stats = region_term_stats(bundle, region)
    terms = term_salience(stats, term_metric, REGION_TOP_TERMS, kappa)
    docs = doc_salience(
        bundle,
        region,
        doc_metric,
        REGION_TOP_DOCS,
        anchor=anchor,
        space=space,
        term_ranking=terms,
    )
    matrix = _presence_matrix(bundle, terms.ids(), docs.ids())
    return {
        "provenance": provenance_payload(region.provenance),
        "n_r": region.n_r,
        "term_metric": term_metric,
        "doc_metric": doc_metric,
        "kappa": kappa,
        "terms": _ranking_payload(terms),
        "docs": [
            {**_doc_summary(bundle, doc_id), "score": score}
            for doc_id, score in docs.items
        ],
        "matrix": matrix,
    }


def _presence_matrix(
    bundle: CorpusBundle, terms: Sequence[str], doc_ids: Sequence[str]
) -> list[list[bool]]:
    """matrix[t][d] is True iff stem t occurs in document d."""
    stem_sets = [set(bundle.tokenized[bundle.ordinal(d)].stem_counts) for d in doc_ids]
    return [[term in stems for stems in stem_sets] for term in terms]


def neighborhood_report(
    explorer: Explorer,
    doc: str,
    doc2: Optional[str] = None,
    space: str = "tfidf",
    alt_space: Optional[str] = None,
    n: int = DEFAULT_NEIGHBORS,
    term_metric: str = "g2",
) -> dict:
    bundle = explorer.bundle
    if space not in bundle.spaces:
        raise UnknownSpaceError(f"unknown space {space!r}", field="space")
    if alt_space is None:
        others = [s for s in bundle.spaces if s != space]
        alt_space = others[0] if others else None
    elif alt_space not in bundle.spaces:
        raise UnknownSpaceError(f"unknown space {alt_space!r}", field="alt_space")

    degenerate = doc2 is not None and doc2 == doc
    centers = [doc] if (doc2 is None or degenerate) else [doc, doc2]
    space_names = [space] + ([alt_space] if alt_space and alt_space != space else [])

    lists: dict[str, dict[str, list[tuple[str, float]]]] = {}
    for center in centers:
        lists[center] = {
            name: query_neighbors(bundle, center, name, n) for name in space_names
        }

    member_sets = {
        center: {name: {d for d, _ in entries} for name, entries in per_space.items()}
        for center, per_space in lists.items()
    }

    neighborhoods = []
    for center in centers:
        other_center = next((c for c in centers if c != center), None)
        per_space_payload = {}
        for name in space_names:
            other_space = next((s for s in space_names if s != name), None)
            entries = []
            for doc_id, distance in lists[center][name]:
                in_other_list = bool(
                    other_space and doc_id in member_sets[center][other_space]
                )
                in_other_selection = bool(
                    other_center
                    and any(
                        doc_id in member_sets[other_center][s] for s in space_names
                    )
                )
                entries.append(
                    {
                        **_doc_summary(bundle, doc_id),
                        "distance": distance,
                        "in_other_list": in_other_list,
                        "in_other_selection": in_other_selection,
                    }
                )
            per_space_payload[name] = entries
        radial = radial_layout(
            bundle, center, [d for d, _ in lists[center][space]], space
        ) if lists[center][space] else None
        neighborhoods.append(
            {
                "center": _doc_summary(bundle, center),
                "lists": per_space_payload,
                "radial": None
                if radial is None
                else {
                    "center": radial.center,
                    "entries": [
                        {"doc_id": d, "radius": r, "angle": a}
                        for d, r, a in radial.entries
                    ],
                },
            }
        )

    region_ids: list[str] = []
    for center in centers:
        if center not in region_ids:
            region_ids.append(center)
        for doc_id, _ in lists[center][space]:
            if doc_id not in region_ids:
                region_ids.append(doc_id)
    region = explorer.region(ExplicitRegion(tuple(region_ids)))
    stats = region_term_stats(bundle, region)
    terms = term_salience(stats, term_metric, NEIGHBORHOOD_TOP_TERMS)
    matrix_docs = list(region_ids)
    return {
        "centers": [_doc_summary(bundle, c) for c in centers],
        "degenerate_dual": degenerate,
        "space": space,
        "alt_space": alt_space,
        "n": n,
        "term_metric": term_metric,
        "neighborhoods": neighborhoods,
        "matrix": {
            "terms": _ranking_payload(terms),
            "docs": [_doc_summary(bundle, d) for d in matrix_docs],
            "cells": _presence_matrix(bundle, terms.ids(), matrix_docs),
        },
    }


def _span_payload(spans, with_intensity: bool = True) -> list[dict]:
    out = []
    for span in spans:
        item = {"start": span.start, "end": span.end, "stem": span.stem}
        if with_intensity:
            item["intensity"] = span.intensity
        out.append(item)
    return out


def _plain_spans(bundle: CorpusBundle, doc_id: str, stems: Sequence[str]) -> list[dict]:
    tok = bundle.tokenized[bundle.ordinal(doc_id)]
    wanted = set(stems)
    return [
        {"start": int(s), "end": int(e), "stem": stem}
        for s, e, stem in zip(tok.starts.tolist(), tok.ends.tolist(), tok.stems)
        if stem in wanted
    ]


def document_report(
    explorer: Explorer,
    doc_id: str,
    region: Optional[Provenance] = None,
    search_terms: Optional[str] = None,
    term_metric: str = "g2",
    n_salient: int = DOCUMENT_TOP_TERMS,
) -> dict:
    bundle = explorer.bundle
    doc = bundle.document(doc_id)
    salient = single_doc_term_salience(bundle, doc_id, n_salient)
    intensity = intensity_buckets(dict(salient.items))
    tok = bundle.tokenized[bundle.ordinal(doc_id)]
    salience_spans = [
        {"start": int(s), "end": int(e), "stem": stem, "intensity": intensity[stem]}
        for s, e, stem in zip(tok.starts.tolist(), tok.ends.tolist(), tok.stems)
        if stem in intensity
    ]

    region_terms = None
    region_spans = None
    if region is not None:
        selection = explorer.region(region)
        stats = region_term_stats(bundle, selection)
        ranking = term_salience(stats, term_metric, REGION_TOP_TERMS)
        region_terms = _ranking_payload(ranking)
        region_spans = _plain_spans(bundle, doc_id, ranking.ids())

    search_spans = None
    search_stems: list[str] = []
    if search_terms is not None and search_terms.strip():
        search_stems = query_stems(bundle.search_index, search_terms)
        if not search_stems:
            raise EmptyQueryError(
                f"search_terms {search_terms!r} has no searchable terms",
                field="search_terms",
            )
        search_spans = _plain_spans(bundle, doc_id, search_stems)

    return {
        "doc": {
            "doc_id": doc.doc_id,
            "title": doc.title,
            "body": doc.body,
            "year": doc.year,
            "venue": doc.venue,
            "authors": list(doc.authors) if doc.authors else None,
        },
        "salient_terms": _ranking_payload(salient),
        "salience_spans": salience_spans,
        "region_terms": region_terms,
        "region_spans": region_spans,
        "search_stems": search_stems or None,
        "search_spans": search_spans,
    }


def pair_report(explorer: Explorer, a: str, b: str) -> dict:
    bundle = explorer.bundle
    if a == b:
        raise CorpexError("pair endpoints need two distinct documents", field="b")
    pair = pair_term_salience(bundle, a, b)
    report_a = document_report(explorer, a)
    report_b = document_report(explorer, b)
    report_a["pair_spans"] = _span_payload(pair.spans_a)
    report_b["pair_spans"] = _span_payload(pair.spans_b)
    return {
        "pair": {
            "a": a,
            "b": b,
            "weights": [{"term": t, "weight": w} for t, w in pair.weights],
            "total_weight": pair.total_weight,
        },
        "a": report_a,
        "b": report_b,
    }


def cell_info(explorer: Explorer, i: int, j: int) -> dict:
    grid = explorer.grid
    if not (0 <= i < grid.bins and 0 <= j < grid.bins):
        raise OutOfRangeError(
            f"cell ({i},{j}) outside the {grid.bins}x{grid.bins} grid", field="cell"
        )
    terms = (grid.cell_terms or {}).get((i, j), ())
    return {
        "i": i,
        "j": j,
        "count": int(grid.counts[i, j]),
        "terms": [{"term": t, "score": s} for t, s in terms],
    }


def layout_payload(explorer: Explorer) -> dict:
    bundle = explorer.bundle
    grid = explorer.grid
    xmin, xmax = grid.x_range
    ymin, ymax = grid.y_range
    docs = [
        {"doc_id": doc_id, "x": float(x), "y": float(y)}
        for doc_id, (x, y) in zip(bundle.doc_ids, bundle.layout.coords.tolist())
    ]
    return {
        "docs": docs,
        "grid": {
            "bins": grid.bins,
            "x_range": [xmin, xmax],
            "y_range": [ymin, ymax],
            "counts": grid.counts.tolist(),
        },
    }


def search_report(
    explorer: Explorer,
    q: str,
    mode: str = "any",
    sort: str = "relevance",
    anchor: Optional[str] = None,
    space: str = "tfidf",
    n: int = 50,
) -> dict:
    bundle = explorer.bundle
    hits = keyword_search(bundle.search_index, q, mode)
    total = len(hits)
    if sort != "relevance":
        hits = sort_hits(hits, sort, bundle=bundle, anchor=anchor, space=space)
    hits = hits[:n] if n >= 0 else hits
    return {
        "query": q,
        "mode": mode,
        "sort": sort,
        "total": total,
        "hits": [
            {
                **_doc_summary(bundle, h.doc_id),
                "score": h.score,
                "spans": {
                    stem: [[s, e] for s, e in spans]
                    for stem, spans in h.matched_spans.items()
                },
            }
            for h in hits
        ],
    }


def neighbors_payload(
    explorer: Explorer, doc: str, space: str = "tfidf", n: int = DEFAULT_NEIGHBORS
) -> dict:
    """Bare neighbor list, the CLI knn surface."""
    entries = query_neighbors(explorer.bundle, doc, space, n)
    return {
        "doc": doc,
        "space": space,
        "n": n,
        "neighbors": [
            {"doc_id": d, "distance": dist} for d, dist in entries
        ],
    }
