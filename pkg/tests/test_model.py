import dataclasses

import numpy as np
import pytest

from corpex.errors import UnknownDocumentError
from corpex.model import validate_bundle


def test_well_formed_bundle_has_no_violations(toy_bundle):
    assert validate_bundle(toy_bundle) == []


def test_layout_missing_doc_is_reported(toy_bundle):
    broken_layout = dataclasses.replace(
        toy_bundle.layout,
        doc_ids=toy_bundle.layout.doc_ids[:-1],
        coords=toy_bundle.layout.coords[:-1],
    )
    broken = dataclasses.replace(toy_bundle, layout=broken_layout)
    violations = validate_bundle(broken)
    missing_id = toy_bundle.doc_ids[-1]
    assert any(f"layout missing doc_id={missing_id}" in v for v in violations)


def test_df_miscount_names_the_term(toy_bundle):
    vocab = toy_bundle.vocabulary
    term_id = vocab.term_ids["robot"]
    wrong_df = vocab.df_g.copy()
    true_df = int(wrong_df[term_id])
    wrong_df[term_id] = true_df + 1
    broken_vocab = dataclasses.replace(vocab, df_g=wrong_df)
    broken = dataclasses.replace(toy_bundle, vocabulary=broken_vocab)
    violations = validate_bundle(broken)
    assert any(
        "'robot'" in v and str(true_df) in v and str(true_df + 1) in v
        for v in violations
    )


def test_df_recount_matches_scan(toy_bundle):
    vocab = toy_bundle.vocabulary
    for term_id, stem in enumerate(vocab.terms):
        rescan = sum(1 for tok in toy_bundle.tokenized if stem in tok.stem_counts)
        assert rescan == int(vocab.df_g[term_id])


def test_identifier_coverage(toy_bundle):
    ids = list(toy_bundle.doc_ids)
    assert [t.doc_id for t in toy_bundle.tokenized] == ids
    for space in toy_bundle.spaces.values():
        assert list(space.doc_ids) == ids
    for index in toy_bundle.neighbor_indices.values():
        assert list(index.doc_ids) == ids
    assert list(toy_bundle.layout.doc_ids) == ids


def test_unknown_document_raises(toy_bundle):
    with pytest.raises(UnknownDocumentError):
        toy_bundle.ordinal("nope")


def test_token_spans_reconstruct_surfaces(toy_bundle):
    for tok in toy_bundle.tokenized:
        for token in tok.tokens():
            assert tok.text[token.start : token.end] == token.surface
        # spans ascending and non-overlapping
        assert np.all(np.diff(tok.starts) > 0)
        assert np.all(tok.ends[:-1] <= tok.starts[1:])
        assert np.all(tok.ends > tok.starts)
