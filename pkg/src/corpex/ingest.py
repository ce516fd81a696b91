"""Preprocessing pipeline: bibliography files in, CorpusBundle out.

Pipeline order is tokenize -> vocabulary -> tf-idf vectors -> neighbor
indices (one per space) -> layout -> search index. Every per-document step
is pure; the pipeline is invoked by a single owner.
"""

from __future__ import annotations

import csv
import json
import logging
import re
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Sequence

import numpy as np
import scipy.sparse as sp

from .errors import BundleError, DuplicateIdError, IngestError
from .model import CorpusBundle, DocumentRecord, Token, TokenizedDocument, Vocabulary, validate_bundle
from .spaces import SPARSE, SparseVector, VectorSpace, build_neighbor_index, dense_space_from_rows
from .text import DEFAULT_STOPWORDS, porter_stem

log = logging.getLogger(__name__)

_TOKEN_RE = re.compile(r"[0-9A-Za-z]+")

LAYOUT_SVD = "builtin-svd"
LAYOUT_IMPORT = "import"


@dataclass(frozen=True)
class IngestOptions:
    stopword_list: frozenset[str] = DEFAULT_STOPWORDS
    min_token_length: int = 2
    knn_k: int = 100
    layout_method: str = LAYOUT_SVD
    layout_path: Optional[str] = None
    grid_bins: int = 40
    cell_term_metric: str = "g2"
    cell_term_count: int = 5

    def __post_init__(self):
        if self.min_token_length < 1:
            raise IngestError("min_token_length must be >= 1", field="min_token_length")
        if self.knn_k < 1:
            raise IngestError("knn_k must be >= 1", field="knn_k")
        if self.grid_bins < 2:
            raise IngestError("grid_bins must be >= 2", field="grid_bins")
        if self.layout_method not in (LAYOUT_SVD, LAYOUT_IMPORT):
            raise IngestError(
                f"unknown layout_method {self.layout_method!r}", field="layout_method"
            )
        if self.layout_method == LAYOUT_IMPORT and not self.layout_path:
            raise IngestError("layout_method=import requires layout_path", field="layout_path")


@dataclass
class LoadResult:
    records: list[DocumentRecord]
    dropped_empty: int
    source: str


def _check_duplicates(records: Sequence[DocumentRecord]) -> None:
    seen: set[str] = set()
    for record in records:
        if record.doc_id in seen:
            raise DuplicateIdError(f"duplicate doc_id: {record.doc_id!r}", field="doc_id")
        seen.add(record.doc_id)


def _coerce_year(raw, where: str) -> Optional[int]:
    if raw is None or raw == "":
        return None
    try:
        return int(raw)
    except (TypeError, ValueError):
        raise IngestError(f"{where}: year {raw!r} is not an integer", field="year")


def _record_from_mapping(obj: dict, where: str, authors_sep: Optional[str]) -> Optional[DocumentRecord]:
    """Build one record; returns None for an empty body (caller counts drops)."""
    for key in ("doc_id", "title", "body"):
        if key not in obj or obj[key] is None:
            raise IngestError(f"{where}: missing required key {key!r}", field=key)
    doc_id = obj["doc_id"]
    if not isinstance(doc_id, str):
        doc_id = str(doc_id)
    if not doc_id:
        raise IngestError(f"{where}: empty doc_id", field="doc_id")
    title, body = obj["title"], obj["body"]
    if not isinstance(title, str) or not isinstance(body, str):
        raise IngestError(f"{where}: title and body must be strings")
    if not body.strip():
        return None
    authors = obj.get("authors")
    if isinstance(authors, str):
        authors = [a.strip() for a in authors.split(authors_sep or ";") if a.strip()] or None
    if authors is not None:
        if not isinstance(authors, (list, tuple)) or not all(isinstance(a, str) for a in authors):
            raise IngestError(f"{where}: authors must be a list of strings", field="authors")
        authors = tuple(authors)
    venue = obj.get("venue") or None
    if venue is not None and not isinstance(venue, str):
        raise IngestError(f"{where}: venue must be a string", field="venue")
    return DocumentRecord(
        doc_id=doc_id,
        title=title,
        body=body,
        year=_coerce_year(obj.get("year"), where),
        venue=venue,
        authors=authors,
    )


def _load_jsonl(path: Path) -> LoadResult:
    records, dropped = [], 0
    with open(path, encoding="utf-8") as handle:
        for lineno, line in enumerate(handle, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise IngestError(f"{path}:{lineno}: malformed JSON: {exc.msg}")
            if not isinstance(obj, dict):
                raise IngestError(f"{path}:{lineno}: expected an object per line")
            record = _record_from_mapping(obj, f"{path}:{lineno}", ";")
            if record is None:
                dropped += 1
            else:
                records.append(record)
    return LoadResult(records, dropped, str(path))


def _load_csv(path: Path) -> LoadResult:
    records, dropped = [], 0
    with open(path, encoding="utf-8", newline="") as handle:
        reader = csv.DictReader(handle)
        if reader.fieldnames is None or not {"doc_id", "title", "body"} <= set(reader.fieldnames):
            raise IngestError(f"{path}: csv must have doc_id,title,body columns")
        for row in reader:
            record = _record_from_mapping(row, f"{path}:{reader.line_num}", ";")
            if record is None:
                dropped += 1
            else:
                records.append(record)
    return LoadResult(records, dropped, str(path))


_BIB_ENTRY_RE = re.compile(r"@(\w+)\s*\{", re.IGNORECASE)
_BIB_FIELD_RE = re.compile(r"(\w+)\s*=\s*", re.IGNORECASE)


def _bib_read_value(text: str, pos: int, where: str) -> tuple[str, int]:
    if text[pos] == "{":
        depth, start = 1, pos + 1
        i = start
        while i < len(text) and depth:
            if text[i] == "{":
                depth += 1
            elif text[i] == "}":
                depth -= 1
            i += 1
        if depth:
            raise IngestError(f"{where}: unbalanced braces in field value")
        return text[start : i - 1], i
    if text[pos] == '"':
        end = text.find('"', pos + 1)
        if end < 0:
            raise IngestError(f"{where}: unterminated quoted value")
        return text[pos + 1 : end], end + 1
    match = re.match(r"[^,}\n]*", text[pos:])
    return match.group().strip(), pos + match.end()


def _load_bibtex(path: Path) -> LoadResult:
    """Subset parser: @article/@inproceedings with title/abstract/year/author."""
    text = path.read_text(encoding="utf-8")
    records, dropped = [], 0
    for match in _BIB_ENTRY_RE.finditer(text):
        entry_type = match.group(1).lower()
        lineno = text.count("\n", 0, match.start()) + 1
        where = f"{path}:{lineno}"
        pos = match.end()
        key_end = text.find(",", pos)
        brace_end = text.find("}", pos)
        if key_end < 0 or (0 <= brace_end < key_end):
            continue  # key-only or empty entry
        key = text[pos:key_end].strip()
        if entry_type not in ("article", "inproceedings"):
            continue
        if not key:
            raise IngestError(f"{where}: entry has no citation key")
        fields: dict[str, str] = {}
        pos = key_end + 1
        while pos < len(text):
            while pos < len(text) and text[pos] in " \t\r\n,":
                pos += 1
            if pos >= len(text) or text[pos] == "}":
                break
            fmatch = _BIB_FIELD_RE.match(text, pos)
            if not fmatch:
                raise IngestError(f"{where}: malformed field near character {pos}")
            value, pos = _bib_read_value(text, fmatch.end(), where)
            fields[fmatch.group(1).lower()] = re.sub(r"\s+", " ", value).strip()
        record = _record_from_mapping(
            {
                "doc_id": key,
                "title": fields.get("title", ""),
                "body": fields.get("abstract", ""),
                "year": fields.get("year") or None,
                "venue": fields.get("journal") or fields.get("booktitle") or None,
                "authors": [a.strip() for a in fields.get("author", "").split(" and ") if a.strip()]
                or None,
            },
            where,
            None,
        )
        if record is None:
            dropped += 1
        else:
            records.append(record)
    return LoadResult(records, dropped, str(path))


_LOADERS = {"jsonl": _load_jsonl, "csv": _load_csv, "bibtex": _load_bibtex}


def load_corpus_source(path, format: str = "jsonl") -> LoadResult:
    """Parse a bibliography file; empty-body entries are dropped and counted."""
    path = Path(path)
    if format not in _LOADERS:
        raise IngestError(f"unknown format {format!r}; expected one of {sorted(_LOADERS)}")
    if not path.is_file():
        raise IngestError(f"cannot read corpus source: {path}")
    result = _LOADERS[format](path)
    _check_duplicates(result.records)
    return result


def tokenize_and_stem(text: str, opts: IngestOptions, doc_id: str = "") -> TokenizedDocument:
    """Tokenize on alphanumeric runs, keeping exact character spans.

    Stopwords, pure numbers, and tokens shorter than min_token_length stay in
    the token stream (their spans are needed for highlighting) but carry no
    stem and therefore never become terms.
    """
    if not text.strip():
        raise IngestError("cannot tokenize empty text")
    stopwords = opts.stopword_list
    min_len = opts.min_token_length
    tokens: list[Token] = []
    for match in _TOKEN_RE.finditer(text):
        surface = match.group()
        lower = surface.lower()
        if lower in stopwords or len(lower) < min_len or lower.isdigit():
            stem = None
        else:
            stem = porter_stem(lower)
        tokens.append(Token(surface, match.start(), match.end(), stem))
    return TokenizedDocument.from_tokens(doc_id, text, tokens)


def build_vocabulary(tokenized: Sequence[TokenizedDocument]) -> Vocabulary:
    """df_g counts documents containing each stem, not occurrences."""
    if not tokenized:
        raise IngestError("cannot build a vocabulary from zero documents")
    df: dict[str, int] = {}
    for doc in tokenized:
        for stem in doc.stem_counts:
            df[stem] = df.get(stem, 0) + 1
    terms = tuple(sorted(df))
    df_g = np.asarray([df[t] for t in terms], dtype=np.int64)
    return Vocabulary(terms=terms, df_g=df_g, n_g=len(tokenized))


def vectorize_tfidf(doc: TokenizedDocument, vocab: Vocabulary) -> SparseVector:
    """Components tf * (ln(n_g/df_g)+1), float32, nonzero entries only."""
    ids = []
    tfs = []
    for stem, count in doc.stem_counts.items():
        term_id = vocab.id_of(stem)
        if term_id is None:
            raise IngestError(
                f"out-of-vocabulary stem {stem!r} in doc {doc.doc_id!r};"
                " vectorize after build_vocabulary over the same documents"
            )
        ids.append(term_id)
        tfs.append(count)
    order = np.argsort(ids) if ids else []
    indices = np.asarray(ids, dtype=np.int32)[order] if ids else np.empty(0, dtype=np.int32)
    tf = np.asarray(tfs, dtype=np.float64)[order] if ids else np.empty(0)
    values = (tf * vocab.idf[indices]).astype(np.float32)
    return SparseVector(indices, values, len(vocab))


def vectorize_query_text(stem_counts, vocab: Vocabulary) -> SparseVector:
    """Like vectorize_tfidf but out-of-vocabulary stems are silently dropped."""
    known = {s: c for s, c in stem_counts.items() if vocab.id_of(s) is not None}
    ids = sorted(vocab.id_of(s) for s in known)
    indices = np.asarray(ids, dtype=np.int32)
    by_id = {vocab.id_of(s): c for s, c in known.items()}
    tf = np.asarray([by_id[i] for i in ids], dtype=np.float64)
    values = (tf * vocab.idf[indices]).astype(np.float32) if ids else np.empty(0, dtype=np.float32)
    return SparseVector(indices, values, len(vocab))


def _tfidf_space(
    doc_ids: tuple[str, ...], tokenized: Sequence[TokenizedDocument], vocab: Vocabulary
) -> VectorSpace:
    indptr = np.zeros(len(tokenized) + 1, dtype=np.int64)
    all_indices = []
    all_values = []
    for i, doc in enumerate(tokenized):
        vec = vectorize_tfidf(doc, vocab)
        indptr[i + 1] = indptr[i] + vec.nnz
        all_indices.append(vec.indices)
        all_values.append(vec.values)
    indices = np.concatenate(all_indices) if all_indices else np.empty(0, dtype=np.int32)
    values = np.concatenate(all_values) if all_values else np.empty(0, dtype=np.float32)
    matrix = sp.csr_matrix((values, indices, indptr), shape=(len(tokenized), len(vocab)))
    return VectorSpace("tfidf", SPARSE, doc_ids, matrix)


def build_bundle(
    records: Sequence[DocumentRecord],
    opts: IngestOptions,
    *,
    embeddings: Optional[dict[str, str]] = None,
    name: str = "corpus",
) -> CorpusBundle:
    """Run the whole precomputation pipeline and validate the result."""
    from .bundle_io import read_dense_vectors
    from .layout import import_layout, svd_layout
    from .search import index_from_components

    if len(records) < opts.knn_k + 1:
        raise IngestError(
            f"corpus has {len(records)} documents; need at least knn_k+1={opts.knn_k + 1}"
        )
    _check_duplicates(records)
    documents = tuple(records)
    doc_ids = tuple(r.doc_id for r in documents)

    started = time.monotonic()
    tokenized = tuple(tokenize_and_stem(r.body, opts, r.doc_id) for r in documents)
    vocab = build_vocabulary(tokenized)
    log.info("tokenized %d docs, %d terms (%.1fs)", len(documents), len(vocab), time.monotonic() - started)

    spaces: dict[str, VectorSpace] = {"tfidf": _tfidf_space(doc_ids, tokenized, vocab)}
    for space_name, vec_path in (embeddings or {}).items():
        if space_name in spaces:
            raise IngestError(f"duplicate space name {space_name!r}", field="embeddings")
        rows = read_dense_vectors(vec_path)
        spaces[space_name] = dense_space_from_rows(rows, space_name, doc_ids, source=str(vec_path))

    neighbor_indices = {}
    for space_name, space in spaces.items():
        t0 = time.monotonic()
        neighbor_indices[space_name] = build_neighbor_index(space, opts.knn_k)
        log.info("kNN(%s) k=%d built in %.1fs", space_name, opts.knn_k, time.monotonic() - t0)

    if opts.layout_method == LAYOUT_IMPORT:
        layout = import_layout(opts.layout_path, doc_ids)
    else:
        layout = svd_layout(spaces["tfidf"])

    search_index = index_from_components(documents, tokenized, opts)

    manifest = {
        "format_version": 1,
        "name": name,
        "doc_count": len(documents),
        "vocab_size": len(vocab),
        "options": {
            "min_token_length": opts.min_token_length,
            "knn_k": opts.knn_k,
            "layout_method": opts.layout_method,
            "layout_path": opts.layout_path,
            "grid_bins": opts.grid_bins,
            "cell_term_metric": opts.cell_term_metric,
            "cell_term_count": opts.cell_term_count,
            "stopwords": sorted(opts.stopword_list),
        },
        "spaces": {
            s.name: {"kind": s.kind, "dim": int(s.dim)} for s in spaces.values()
        },
        "scoring": {
            "idf": "ln(n_g/df_g)+1",
            "bm25": {"k1": 1.2, "b": 0.75},
        },
        "defaults": {"n": 10, "k": opts.knn_k, "kappa": 1.0},
    }

    bundle = CorpusBundle(
        name=name,
        documents=documents,
        tokenized=tokenized,
        vocabulary=vocab,
        spaces=spaces,
        neighbor_indices=neighbor_indices,
        layout=layout,
        search_index=search_index,
        options=opts,
        manifest=manifest,
    )
    violations = validate_bundle(bundle)
    if violations:
        raise BundleError("bundle failed validation: " + "; ".join(violations[:5]))
    return bundle
