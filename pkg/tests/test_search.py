import numpy as np
import pytest

from corpex.errors import EmptyQueryError
from corpex.ingest import IngestOptions, build_bundle
from corpex.model import DocumentRecord
from corpex.search import build_search_index, keyword_search, query_stems, sort_hits

from conftest import synthetic_records
from oracles import oracle_bm25, oracle_search


# ---------------------------------------------------------------- index

def test_one_doc_corpus_postings(toy_bundle):
    records = [
        DocumentRecord("only", "A Robot Title", "Grasping with tactile robots."),
        DocumentRecord("pad1", "x", "alpha beta"),
        DocumentRecord("pad2", "y", "gamma delta"),
    ]
    bundle = build_bundle(records, IngestOptions(knn_k=1, grid_bins=2), name="single")
    index = bundle.search_index
    posting = index.postings["robot"]
    assert posting.ordinals.tolist() == [0]
    assert posting.tfs.tolist() == [2]  # once in title, once in body
    # body span only (title matches contribute no body spans)
    body = records[0].body
    start = body.index("robots")
    assert posting.spans_for(0) == ((start, start + len("robots")),)


def test_absent_stem_has_no_postings(toy_bundle):
    assert toy_bundle.search_index.df("nonexistentstem") == 0


def test_rebuilt_index_is_identical(toy_bundle):
    rebuilt = build_search_index(toy_bundle)
    original = toy_bundle.search_index
    assert rebuilt.doc_ids == original.doc_ids
    assert rebuilt.avgdl == original.avgdl
    np.testing.assert_array_equal(rebuilt.doc_lengths, original.doc_lengths)
    assert list(rebuilt.postings) == list(original.postings)
    for stem, posting in original.postings.items():
        other = rebuilt.postings[stem]
        np.testing.assert_array_equal(posting.ordinals, other.ordinals)
        np.testing.assert_array_equal(posting.tfs, other.tfs)
        np.testing.assert_array_equal(posting.span_offsets, other.span_offsets)
        np.testing.assert_array_equal(posting.span_starts, other.span_starts)
        np.testing.assert_array_equal(posting.span_ends, other.span_ends)


def test_title_only_terms_are_searchable(toy_bundle):
    records = [
        DocumentRecord("t", "Zymurgy Studies", "completely unrelated body text"),
        DocumentRecord("u", "Other", "some words here"),
        DocumentRecord("v", "Third", "more words appear"),
    ]
    bundle = build_bundle(records, IngestOptions(knn_k=1, grid_bins=2), name="titles")
    hits = keyword_search(bundle.search_index, "zymurgy", "any")
    assert [h.doc_id for h in hits] == ["t"]
    assert hits[0].matched_spans["zymurgi"] == ()  # no body occurrence to highlight


# --------------------------------------------------------------- search

def test_stem_unique_to_one_doc(toy_bundle):
    hits = keyword_search(toy_bundle.search_index, "haptic", "any")
    assert [h.doc_id for h in hits] == ["d4"]


def test_all_terms_with_disjoint_stems_is_empty(toy_bundle):
    assert keyword_search(toy_bundle.search_index, "haptic visualization", "all") == []


def test_any_term_unions(toy_bundle):
    any_hits = {h.doc_id for h in keyword_search(toy_bundle.search_index, "haptic visualization", "any")}
    assert any_hits == {"d2", "d3", "d4"}


def test_word_variants_match_through_stemming(toy_bundle):
    for query in ("robots", "robotics", "robot"):
        hits = {h.doc_id for h in keyword_search(toy_bundle.search_index, query, "any")}
        assert {"d0", "d1"} <= hits


def test_empty_effective_query_raises(toy_bundle):
    with pytest.raises(EmptyQueryError):
        keyword_search(toy_bundle.search_index, "the of and", "any")
    with pytest.raises(EmptyQueryError):
        keyword_search(toy_bundle.search_index, "   ", "any")


def test_mode_aliases(toy_bundle):
    a = keyword_search(toy_bundle.search_index, "robot planning", "all")
    b = keyword_search(toy_bundle.search_index, "robot planning", "all-terms")
    assert [h.doc_id for h in a] == [h.doc_id for h in b]
    with pytest.raises(ValueError):
        keyword_search(toy_bundle.search_index, "robot", "fuzzy")


def test_match_spans_stem_back_to_query(toy_bundle):
    hits = keyword_search(toy_bundle.search_index, "robots learning", "any")
    stems = set(query_stems(toy_bundle.search_index, "robots learning"))
    for hit in hits:
        tok = toy_bundle.tokenized[toy_bundle.ordinal(hit.doc_id)]
        for stem, spans in hit.matched_spans.items():
            assert stem in stems
            for start, end in spans:
                surface = tok.text[start:end]
                from corpex.text import porter_stem

                assert porter_stem(surface.lower()) == stem


def _stem_sets(bundle):
    out = []
    for ordinal in range(bundle.n_g):
        stems = set(bundle.tokenized[ordinal].stem_counts)
        title = bundle.documents[ordinal].title
        if title.strip():
            from corpex.ingest import tokenize_and_stem

            stems |= {
                s
                for s in tokenize_and_stem(title, bundle.options).stems
                if s is not None
            }
        out.append(stems)
    return out


def _term_freqs(bundle):
    out = []
    for ordinal in range(bundle.n_g):
        tf = dict(bundle.tokenized[ordinal].stem_counts)
        title = bundle.documents[ordinal].title
        if title.strip():
            from corpex.ingest import tokenize_and_stem

            for stem in tokenize_and_stem(title, bundle.options).stems:
                if stem is not None:
                    tf[stem] = tf.get(stem, 0) + 1
        out.append(tf)
    return out


def test_hit_sets_match_linear_scan_oracle():
    rng = np.random.default_rng(53)
    records = synthetic_records(rng, 60, vocab_size=40)
    bundle = build_bundle(records, IngestOptions(knn_k=3, grid_bins=3), name="scan")
    stem_sets = _stem_sets(bundle)
    words = sorted({s for stems in stem_sets for s in stems})
    for trial in range(30):
        q = list(rng.choice(words, size=int(rng.integers(1, 4)), replace=False))
        for mode in ("all", "any"):
            hits = keyword_search(bundle.search_index, " ".join(q), mode)
            got = {bundle.ordinal(h.doc_id) for h in hits}
            assert got == oracle_search(stem_sets, q, mode)


def test_bm25_ranking_matches_oracle():
    rng = np.random.default_rng(59)
    records = synthetic_records(rng, 50, vocab_size=30)
    bundle = build_bundle(records, IngestOptions(knn_k=3, grid_bins=3), name="bm")
    tfs = _term_freqs(bundle)
    words = sorted({s for tf in tfs for s in tf})
    for trial in range(20):
        q = list(rng.choice(words, size=int(rng.integers(1, 4)), replace=False))
        hits = keyword_search(bundle.search_index, " ".join(q), "any")
        expected = oracle_bm25(tfs, list(bundle.doc_ids), q)
        assert [h.doc_id for h in hits] == [doc_id for doc_id, _ in expected]
        for hit, (_, score) in zip(hits, expected):
            assert hit.score == pytest.approx(score, abs=1e-9)


def test_search_determinism(toy_bundle):
    first = keyword_search(toy_bundle.search_index, "robot learning maps", "any")
    second = keyword_search(toy_bundle.search_index, "robot learning maps", "any")
    assert [(h.doc_id, h.score) for h in first] == [(h.doc_id, h.score) for h in second]


def test_top_n_truncates(toy_bundle):
    all_hits = keyword_search(toy_bundle.search_index, "robot learning", "any")
    two = keyword_search(toy_bundle.search_index, "robot learning", "any", top_n=2)
    assert [h.doc_id for h in two] == [h.doc_id for h in all_hits[:2]]


# ----------------------------------------------------------------- sort

def test_sort_by_distance_puts_anchor_first(toy_bundle):
    hits = keyword_search(toy_bundle.search_index, "robot learning exploration", "any")
    assert any(h.doc_id == "d1" for h in hits)
    by_distance = sort_hits(hits, "distance", bundle=toy_bundle, anchor="d1")
    assert by_distance[0].doc_id == "d1"


def test_sort_by_year_undated_last(toy_bundle):
    hits = keyword_search(toy_bundle.search_index, "robot haptic learning", "any")
    assert any(h.doc_id == "d5" for h in hits)  # d5 has no year
    by_year = sort_hits(hits, "year", bundle=toy_bundle)
    assert by_year[-1].doc_id == "d5"
    years = [toy_bundle.document(h.doc_id).year for h in by_year[:-1]]
    assert years == sorted(years, reverse=True)


def test_sort_relevance_is_stable_noop(toy_bundle):
    hits = keyword_search(toy_bundle.search_index, "robot learning", "any")
    assert [h.doc_id for h in sort_hits(hits, "relevance")] == [h.doc_id for h in hits]


def test_sort_missing_prerequisites(toy_bundle):
    hits = keyword_search(toy_bundle.search_index, "robot", "any")
    with pytest.raises(ValueError):
        sort_hits(hits, "distance")
    with pytest.raises(ValueError):
        sort_hits(hits, "sideways", bundle=toy_bundle)
