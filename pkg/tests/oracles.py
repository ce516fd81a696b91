"""Independent brute-force reference implementations for the test suite.

Nothing here shares code with the production modules: every oracle is a
direct, intentionally slow transcription of the contract it checks. Any
divergence between production output and these oracles is a production bug.
"""

from __future__ import annotations

import math

import numpy as np


def oracle_cosine_distance(a: dict, b: dict) -> float:
    """a, b map term -> value (sparse). Mirrors the distance contract."""
    na = math.sqrt(_seq_sum(v * v for _, v in sorted(a.items())))
    nb = math.sqrt(_seq_sum(v * v for _, v in sorted(b.items())))
    if na == 0.0 or nb == 0.0:
        return 1.0
    if a == b:
        return 0.0
    dot = oracle_dot(a, b)
    d = 1.0 - dot / (na * nb)
    return min(max(d, 0.0), 2.0)


def _seq_sum(values) -> float:
    total = 0.0
    for v in values:
        total += v
    return total


def oracle_dot(a: dict, b: dict) -> float:
    """Naive sparse dot product, ascending term order."""
    total = 0.0
    for term in sorted(set(a) & set(b)):
        total += a[term] * b[term]
    return total


def _dense_cosine(a, b) -> float:
    na = math.sqrt(_seq_sum(x * x for x in a))
    nb = math.sqrt(_seq_sum(x * x for x in b))
    if na == 0.0 or nb == 0.0:
        return 1.0
    if list(a) == list(b):
        return 0.0
    dot = _seq_sum(x * y for x, y in zip(a, b))
    return min(max(1.0 - dot / (na * nb), 0.0), 2.0)


def oracle_knn(vectors: dict, k: int) -> dict:
    """All-pairs scan. vectors: doc_id -> {term: value} or doc_id -> [floats].

    Returns doc_id -> [(neighbor_id, float32 distance)], ascending by rounded
    distance then doc_id, self excluded, length min(k, n-1).
    """
    ids = list(vectors)
    sparse = ids and isinstance(vectors[ids[0]], dict)
    norms = {}
    for doc_id in ids:
        v = vectors[doc_id]
        values = (x for _, x in sorted(v.items())) if sparse else v
        norms[doc_id] = math.sqrt(_seq_sum(x * x for x in values))

    def distance(a, b) -> float:
        va, vb = vectors[a], vectors[b]
        if norms[a] == 0.0 or norms[b] == 0.0:
            return 1.0
        if (va == vb) if sparse else (list(va) == list(vb)):
            return 0.0
        dot = oracle_dot(va, vb) if sparse else _seq_sum(x * y for x, y in zip(va, vb))
        return min(max(1.0 - dot / (norms[a] * norms[b]), 0.0), 2.0)

    cache: dict[tuple, float] = {}
    out = {}
    for a in ids:
        pairs = []
        for b in ids:
            if b == a:
                continue
            key = (a, b) if a < b else (b, a)
            d = cache.get(key)
            if d is None:
                d = float(np.float32(distance(a, b)))
                cache[key] = d
            pairs.append((d, b))
        pairs.sort(key=lambda p: (p[0], p[1]))
        out[a] = [(b, d) for d, b in pairs[: min(k, len(ids) - 1)]]
    return out


def oracle_g2(df_r: int, n_r: int, df_g: int, n_g: int) -> float:
    """Four-term log-likelihood sum over the 2x2 document-frequency table."""
    observed = [
        df_r,
        n_r - df_r,
        df_g - df_r,
        (n_g - n_r) - (df_g - df_r),
    ]
    rows = [n_r, n_g - n_r]
    cols = [df_g, n_g - df_g]
    total = 0.0
    for cell, (r, c) in zip(observed, [(0, 0), (0, 1), (1, 0), (1, 1)]):
        if cell > 0:
            expected = rows[r] * cols[c] / n_g
            total += cell * math.log(cell / expected)
    return 2.0 * total


def oracle_search(stem_sets: list[set], query_stems: list[str], mode: str) -> set[int]:
    """Full scan for stem containment; returns matching ordinals."""
    hits = set()
    for ordinal, stems in enumerate(stem_sets):
        if mode == "all":
            if all(stem in stems for stem in query_stems):
                hits.add(ordinal)
        else:
            if any(stem in stems for stem in query_stems):
                hits.add(ordinal)
    return hits


def oracle_bm25(
    doc_term_freqs: list[dict],
    doc_ids: list[str],
    query_stems: list[str],
    k1: float = 1.2,
    b: float = 0.75,
) -> list[tuple[str, float]]:
    """Independent BM25 ranking over all docs with a nonzero score path.

    doc_term_freqs[i] maps stem -> tf for document i (same content the
    production index was built from). Returns (doc_id, score) for every doc
    matching at least one query stem, sorted by (-score, doc_id).
    """
    n = len(doc_term_freqs)
    lengths = [sum(tf.values()) for tf in doc_term_freqs]
    avgdl = sum(lengths) / n if n else 1.0
    if avgdl == 0:
        avgdl = 1.0
    df = {}
    for stem in query_stems:
        df[stem] = sum(1 for tf in doc_term_freqs if stem in tf)
    scored = []
    for i, tf_map in enumerate(doc_term_freqs):
        score = 0.0
        matched = False
        for stem in query_stems:
            tf = tf_map.get(stem, 0)
            if tf == 0:
                continue
            matched = True
            idf = math.log(1.0 + (n - df[stem] + 0.5) / (df[stem] + 0.5))
            score += idf * tf * (k1 + 1.0) / (tf + k1 * (1.0 - b + b * lengths[i] / avgdl))
        if matched:
            scored.append((doc_ids[i], score))
    scored.sort(key=lambda p: (-p[1], p[0]))
    return scored


def oracle_overlap(reference: list, probe: list, probe_lengths: list[int]) -> list[int]:
    """Set intersections of probe prefixes with the reference list."""
    counts = []
    for length in probe_lengths:
        prefix = set(probe[:length])
        counts.append(len([r for r in reference if r in prefix]))
    return counts
