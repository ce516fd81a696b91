"""2D corpus map: coordinates, binned heatmap, region geometry, radial view.

The map exists to contextualize explanations, not the other way around: all
salience machinery is layout-agnostic, so coordinates may come from any
external 2D reduction (import) or from the built-in linear fallback
(centered top-2 SVD of the tf-idf matrix).
"""

from __future__ import annotations

import csv
import functools
import math
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional, Sequence, Union

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg

from .errors import BundleError, EmptyRegionError, IngestError, OutOfRangeError
from .spaces import SPARSE, VectorSpace, cosine_distance


@dataclass(frozen=True)
class LayoutCoordinates:
    doc_ids: tuple[str, ...]
    coords: np.ndarray  # (n, 2) float64, all finite

    @functools.cached_property
    def bounds(self) -> tuple[float, float, float, float]:
        """Tight bounding box (xmin, xmax, ymin, ymax)."""
        x, y = self.coords[:, 0], self.coords[:, 1]
        return float(x.min()), float(x.max()), float(y.min()), float(y.max())


def _flip_signs(u: np.ndarray, vt: np.ndarray) -> np.ndarray:
    """Deterministic sign convention: largest loading of each axis positive."""
    for c in range(u.shape[1]):
        pivot = np.argmax(np.abs(vt[c]))
        if vt[c, pivot] < 0:
            u[:, c] = -u[:, c]
    return u


def svd_layout(space: VectorSpace) -> LayoutCoordinates:
    """Project documents onto the top-2 principal directions of their vectors.

    A documented linear stand-in for imported nonlinear reductions; centered
    so that e.g. mutually orthogonal documents spread symmetrically.
    """
    n, dim = space.matrix.shape
    if n < 3:
        raise IngestError(f"built-in layout needs at least 3 documents, got {n}")
    if space.kind == SPARSE:
        x = space.matrix.astype(np.float64)
        mu = np.asarray(x.mean(axis=0)).ravel()
    else:
        x = space.matrix.astype(np.float64)
        mu = x.mean(axis=0)

    if min(n, dim) <= 4 or n * dim <= 2_000_000:
        dense = (x.toarray() if sp.issparse(x) else x) - mu
        u, s, vt = np.linalg.svd(dense, full_matrices=False)
        k = min(2, len(s))
        u = _flip_signs(u[:, :k] * s[:k], vt[:k])
        coords = np.zeros((n, 2))
        coords[:, :k] = u
    else:
        ones = np.ones(n)

        def matvec(w):
            w = np.asarray(w).ravel()
            return x @ w - (mu @ w) * ones

        def rmatvec(v):
            v = np.asarray(v).ravel()
            return x.T @ v - mu * v.sum()

        operator = scipy.sparse.linalg.LinearOperator((n, dim), matvec=matvec, rmatvec=rmatvec)
        v0 = np.linspace(1.0, 2.0, min(n, dim))
        u, s, vt = scipy.sparse.linalg.svds(operator, k=2, v0=v0)
        order = np.argsort(-s)
        u, s, vt = u[:, order], s[order], vt[order]
        coords = _flip_signs(u * s, vt)
    return LayoutCoordinates(space.doc_ids, np.ascontiguousarray(coords))


def import_layout(path, doc_ids: Sequence[str]) -> LayoutCoordinates:
    """Read (doc_id,x,y) rows covering exactly the bundle's documents."""
    path = Path(path)
    if not path.is_file():
        raise IngestError(f"layout file not found: {path}")
    rows: dict[str, tuple[float, float]] = {}
    with open(path, encoding="utf-8", newline="") as handle:
        for lineno, row in enumerate(csv.reader(handle), start=1):
            if not row or (lineno == 1 and row[0] == "doc_id"):
                continue
            if len(row) != 3:
                raise IngestError(f"{path}:{lineno}: expected doc_id,x,y")
            doc_id = row[0]
            if doc_id in rows:
                raise IngestError(f"{path}:{lineno}: duplicated doc_id {doc_id!r}")
            try:
                x, y = float(row[1]), float(row[2])
            except ValueError:
                raise IngestError(f"{path}:{lineno}: non-numeric coordinates")
            if not (math.isfinite(x) and math.isfinite(y)):
                raise IngestError(f"{path}:{lineno}: non-finite coordinates")
            rows[doc_id] = (x, y)
    missing = [d for d in doc_ids if d not in rows]
    if missing:
        raise IngestError(f"layout file {path} missing doc_id={missing[0]!r}")
    extra = set(rows) - set(doc_ids)
    if extra:
        raise IngestError(f"layout file {path} has unknown doc_id={sorted(extra)[0]!r}")
    coords = np.asarray([rows[d] for d in doc_ids], dtype=np.float64)
    return LayoutCoordinates(tuple(doc_ids), coords)


def compute_layout(bundle, method: str = "builtin-svd", path=None) -> LayoutCoordinates:
    if method == "builtin-svd":
        return svd_layout(bundle.spaces["tfidf"])
    if method == "import":
        return import_layout(path, bundle.doc_ids)
    raise IngestError(f"unknown layout method {method!r}", field="method")


@dataclass(frozen=True)
class HeatmapGrid:
    """Uniform binning of the layout; every document lands in exactly one cell."""

    bins: int
    x_range: tuple[float, float]
    y_range: tuple[float, float]
    counts: np.ndarray  # int64 (bins, bins), axis order [i_x, j_y]
    cell_docs: dict[tuple[int, int], np.ndarray]  # occupied cells -> ordinals
    cell_terms: Optional[dict[tuple[int, int], tuple[tuple[str, float], ...]]] = None

    def docs_in_cell(self, i: int, j: int) -> np.ndarray:
        return self.cell_docs.get((i, j), np.empty(0, dtype=np.int64))


def _axis_bins(values: np.ndarray, low: float, high: float, bins: int) -> np.ndarray:
    """Shared-edge points go to the lower cell; the max coordinate to the last."""
    if high == low:
        return np.zeros(len(values), dtype=np.int64)
    t = (values - low) * bins / (high - low)
    idx = np.ceil(t).astype(np.int64) - 1
    return np.clip(idx, 0, bins - 1)


def bin_layout(layout: LayoutCoordinates, bins: int) -> HeatmapGrid:
    if bins < 2:
        raise ValueError("bins must be >= 2")
    xmin, xmax, ymin, ymax = layout.bounds
    i = _axis_bins(layout.coords[:, 0], xmin, xmax, bins)
    j = _axis_bins(layout.coords[:, 1], ymin, ymax, bins)
    flat = i * bins + j
    counts = np.bincount(flat, minlength=bins * bins).reshape(bins, bins)
    order = np.argsort(flat, kind="stable")
    cell_docs: dict[tuple[int, int], np.ndarray] = {}
    boundaries = np.flatnonzero(np.diff(flat[order])) + 1
    for chunk in np.split(order, boundaries):
        if len(chunk):
            cell = int(flat[chunk[0]])
            cell_docs[(cell // bins, cell % bins)] = np.sort(chunk)
    return HeatmapGrid(bins, (xmin, xmax), (ymin, ymax), counts, cell_docs)


@dataclass(frozen=True)
class RectangleRegion:
    x0: float
    y0: float
    x1: float
    y1: float


@dataclass(frozen=True)
class CellRegion:
    i: int
    j: int


@dataclass(frozen=True)
class ExplicitRegion:
    doc_ids: tuple[str, ...]


Provenance = Union[RectangleRegion, CellRegion, ExplicitRegion]


@dataclass(frozen=True)
class RegionSelection:
    provenance: Provenance
    ordinals: np.ndarray  # sorted ascending
    doc_ids: frozenset[str]

    @property
    def n_r(self) -> int:
        return len(self.ordinals)


def select_region(bundle, provenance: Provenance, grid: Optional[HeatmapGrid] = None) -> RegionSelection:
    """Resolve a geometric or explicit selection to its document set."""
    if isinstance(provenance, ExplicitRegion):
        if not provenance.doc_ids:
            raise EmptyRegionError("explicit selection is empty")
        ordinals = np.asarray(sorted(bundle.ordinal(d) for d in set(provenance.doc_ids)))
    elif isinstance(provenance, RectangleRegion):
        x0, x1 = sorted((provenance.x0, provenance.x1))
        y0, y1 = sorted((provenance.y0, provenance.y1))
        coords = bundle.layout.coords
        mask = (
            (coords[:, 0] >= x0)
            & (coords[:, 0] <= x1)
            & (coords[:, 1] >= y0)
            & (coords[:, 1] <= y1)
        )
        ordinals = np.flatnonzero(mask)
        if len(ordinals) == 0:
            raise EmptyRegionError("no documents inside the selected rectangle")
    elif isinstance(provenance, CellRegion):
        if grid is None:
            grid = bin_layout(bundle.layout, bundle.options.grid_bins)
        if not (0 <= provenance.i < grid.bins and 0 <= provenance.j < grid.bins):
            raise OutOfRangeError(
                f"cell ({provenance.i},{provenance.j}) outside the {grid.bins}x{grid.bins} grid",
                field="cell",
            )
        ordinals = grid.docs_in_cell(provenance.i, provenance.j)
        if len(ordinals) == 0:
            raise EmptyRegionError(f"no documents in cell ({provenance.i},{provenance.j})")
    else:
        raise ValueError(f"unknown provenance {provenance!r}")
    doc_ids = frozenset(bundle.doc_ids[o] for o in ordinals.tolist())
    return RegionSelection(provenance, ordinals.astype(np.int64), doc_ids)


@dataclass(frozen=True)
class RadialLayout:
    """Neighbors around a center: radius preserves distance, angle groups
    mutually similar neighbors."""

    center: str
    entries: tuple[tuple[str, float, float], ...]  # (doc_id, radius, angle)


def radial_layout(bundle, center: str, neighbors: Sequence[str], space: str = "tfidf") -> RadialLayout:
    vspace = bundle.spaces.get(space)
    if vspace is None:
        raise BundleError(f"unknown space {space!r}", field="space")
    if not neighbors:
        raise ValueError("neighbors must be non-empty")
    center_ord = bundle.ordinal(center)
    ords = []
    for doc_id in neighbors:
        if doc_id == center:
            raise ValueError("neighbors must all be distinct from the center")
        ords.append(bundle.ordinal(doc_id))

    center_vec = vspace.vector(center_ord)
    dist_to_center = np.asarray(
        [np.float32(cosine_distance(center_vec, vspace.vector(o))) for o in ords],
        dtype=np.float64,
    )
    max_d = dist_to_center.max()
    radii = dist_to_center / max_d if max_d > 0 else np.zeros(len(ords))

    m = len(ords)
    pair = np.zeros((m, m))
    for a in range(m):
        va = vspace.vector(ords[a])
        for b in range(a + 1, m):
            pair[a, b] = pair[b, a] = cosine_distance(va, vspace.vector(ords[b]))

    # Greedy nearest-neighbor chain: a deterministic 1D seriation so that
    # similar neighbors end up at adjacent angles.
    start = min(range(m), key=lambda a: (dist_to_center[a], neighbors[a]))
    chain = [start]
    remaining = set(range(m)) - {start}
    while remaining:
        last = chain[-1]
        chain.append(min(remaining, key=lambda a: (pair[last, a], neighbors[a])))
        remaining.discard(chain[-1])

    gaps = [pair[chain[idx], chain[idx + 1]] for idx in range(m - 1)]
    closing = pair[chain[-1], chain[0]] if m > 1 else 0.0
    total = sum(gaps) + closing
    if total > 0:
        angles = np.concatenate([[0.0], np.cumsum(gaps)]) * (2.0 * math.pi / total)
    else:
        angles = 2.0 * math.pi * np.arange(m) / m
    entries = tuple(
        (neighbors[chain[idx]], float(radii[chain[idx]]), float(angles[idx]))
        for idx in range(m)
    )
    return RadialLayout(center, entries)


def fill_cell_terms(grid: HeatmapGrid, terms: dict) -> HeatmapGrid:
    """Attach precomputed per-cell salient terms (see salience.cell_terms)."""
    return replace(grid, cell_terms=terms)
