"""Bundle directory serialization.

Layout:
    documents.jsonl     one record per line
    tokenized.bin       spans + vocab stem ids, little-endian
    vocab.json          terms (lexicographic), df_g, n_g
    spaces/<name>.vec   sparse CSR or dense f32 rows
    knn/<name>.bin      per-doc (ordinal, f32 distance) lists
    layout.csv          doc_id,x,y with full-precision floats
    manifest.json       name, options, space/scoring descriptors, checksums

Everything that is cheap to derive deterministically (search index, heatmap
grid, per-cell terms, stem counts) is rebuilt at load time instead of being
stored, so a round-tripped bundle answers every query bit-identically.
"""

from __future__ import annotations

import hashlib
import json
import struct
from pathlib import Path

import numpy as np
import scipy.sparse as sp

from .errors import BundleError, IngestError
from .ingest import IngestOptions
from .layout import LayoutCoordinates, import_layout
from .model import CorpusBundle, DocumentRecord, TokenizedDocument, Vocabulary
from .search import index_from_components
from .spaces import DENSE, SPARSE, NeighborIndex, VectorSpace

_TOK_MAGIC = b"CXTOK001"
_VEC_MAGIC = b"CXVEC001"
_KNN_MAGIC = b"CXKNN001"


def _sha256(path: Path) -> str:
    digest = hashlib.sha256()
    with open(path, "rb") as handle:
        for chunk in iter(lambda: handle.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def _write_documents(path: Path, documents) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for doc in documents:
            obj = {"doc_id": doc.doc_id, "title": doc.title, "body": doc.body}
            if doc.year is not None:
                obj["year"] = doc.year
            if doc.venue is not None:
                obj["venue"] = doc.venue
            if doc.authors is not None:
                obj["authors"] = list(doc.authors)
            handle.write(json.dumps(obj, ensure_ascii=False, sort_keys=True))
            handle.write("\n")


def _read_documents(path: Path) -> tuple[DocumentRecord, ...]:
    records = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if not line.strip():
                continue
            obj = json.loads(line)
            records.append(
                DocumentRecord(
                    doc_id=obj["doc_id"],
                    title=obj["title"],
                    body=obj["body"],
                    year=obj.get("year"),
                    venue=obj.get("venue"),
                    authors=tuple(obj["authors"]) if "authors" in obj else None,
                )
            )
    return tuple(records)


def _write_tokenized(path: Path, tokenized, vocab: Vocabulary) -> None:
    counts = np.asarray([len(t) for t in tokenized], dtype=np.int64)
    starts = np.concatenate([t.starts for t in tokenized]) if len(counts) else np.empty(0, np.int32)
    ends = np.concatenate([t.ends for t in tokenized]) if len(counts) else np.empty(0, np.int32)
    ids = np.empty(int(counts.sum()), dtype=np.int32)
    pos = 0
    term_ids = vocab.term_ids
    for tok in tokenized:
        for stem in tok.stems:
            ids[pos] = -1 if stem is None else term_ids[stem]
            pos += 1
    with open(path, "wb") as handle:
        handle.write(_TOK_MAGIC)
        handle.write(struct.pack("<I", len(counts)))
        handle.write(counts.astype("<i8").tobytes())
        handle.write(starts.astype("<i4").tobytes())
        handle.write(ends.astype("<i4").tobytes())
        handle.write(ids.astype("<i4").tobytes())


def _read_tokenized(path: Path, documents, vocab: Vocabulary) -> tuple[TokenizedDocument, ...]:
    raw = path.read_bytes()
    if raw[:8] != _TOK_MAGIC:
        raise BundleError(f"{path}: bad magic, not a tokenized file")
    (n,) = struct.unpack_from("<I", raw, 8)
    if n != len(documents):
        raise BundleError(f"{path}: {n} documents recorded, {len(documents)} expected")
    offset = 12
    counts = np.frombuffer(raw, dtype="<i8", count=n, offset=offset)
    offset += counts.nbytes
    total = int(counts.sum())
    starts = np.frombuffer(raw, dtype="<i4", count=total, offset=offset)
    offset += starts.nbytes
    ends = np.frombuffer(raw, dtype="<i4", count=total, offset=offset)
    offset += ends.nbytes
    ids = np.frombuffer(raw, dtype="<i4", count=total, offset=offset)

    docs = []
    pos = 0
    terms = vocab.terms
    for doc, count in zip(documents, counts.tolist()):
        chunk = slice(pos, pos + count)
        stems = tuple(
            None if i < 0 else terms[i] for i in ids[chunk].tolist()
        )
        stem_counts: dict[str, int] = {}
        for stem in stems:
            if stem is not None:
                stem_counts[stem] = stem_counts.get(stem, 0) + 1
        docs.append(
            TokenizedDocument(
                doc_id=doc.doc_id,
                text=doc.body,
                starts=starts[chunk].astype(np.int32),
                ends=ends[chunk].astype(np.int32),
                stems=stems,
                stem_counts=stem_counts,
            )
        )
        pos += count
    return tuple(docs)


def _write_space(path: Path, space: VectorSpace) -> None:
    with open(path, "wb") as handle:
        handle.write(_VEC_MAGIC)
        kind = 0 if space.kind == SPARSE else 1
        handle.write(struct.pack("<BII", kind, space.n_docs, space.dim))
        if space.kind == SPARSE:
            matrix = space.matrix
            handle.write(struct.pack("<Q", matrix.nnz))
            handle.write(matrix.indptr.astype("<i8").tobytes())
            handle.write(matrix.indices.astype("<i4").tobytes())
            handle.write(matrix.data.astype("<f4").tobytes())
        else:
            handle.write(space.matrix.astype("<f4").tobytes())


def _read_space(path: Path, name: str, doc_ids) -> VectorSpace:
    raw = path.read_bytes()
    if raw[:8] != _VEC_MAGIC:
        raise BundleError(f"{path}: bad magic, not a vector file")
    kind, n, dim = struct.unpack_from("<BII", raw, 8)
    offset = 8 + struct.calcsize("<BII")
    if n != len(doc_ids):
        raise BundleError(f"{path}: {n} rows recorded, {len(doc_ids)} expected")
    if kind == 0:
        (nnz,) = struct.unpack_from("<Q", raw, offset)
        offset += 8
        indptr = np.frombuffer(raw, dtype="<i8", count=n + 1, offset=offset)
        offset += indptr.nbytes
        indices = np.frombuffer(raw, dtype="<i4", count=nnz, offset=offset)
        offset += indices.nbytes
        data = np.frombuffer(raw, dtype="<f4", count=nnz, offset=offset)
        matrix = sp.csr_matrix(
            (data.astype(np.float32), indices.astype(np.int32), indptr.astype(np.int64)),
            shape=(n, dim),
        )
        return VectorSpace(name, SPARSE, tuple(doc_ids), matrix)
    matrix = np.frombuffer(raw, dtype="<f4", count=n * dim, offset=offset)
    return VectorSpace(name, DENSE, tuple(doc_ids), matrix.reshape(n, dim).astype(np.float32))


def _write_knn(path: Path, index: NeighborIndex) -> None:
    with open(path, "wb") as handle:
        handle.write(_KNN_MAGIC)
        handle.write(struct.pack("<II", index.ordinals.shape[0], index.k))
        handle.write(index.ordinals.astype("<i4").tobytes())
        handle.write(index.distances.astype("<f4").tobytes())


def _read_knn(path: Path, space: str, doc_ids) -> NeighborIndex:
    raw = path.read_bytes()
    if raw[:8] != _KNN_MAGIC:
        raise BundleError(f"{path}: bad magic, not a knn file")
    n, k = struct.unpack_from("<II", raw, 8)
    offset = 8 + struct.calcsize("<II")
    if n != len(doc_ids):
        raise BundleError(f"{path}: {n} rows recorded, {len(doc_ids)} expected")
    ordinals = np.frombuffer(raw, dtype="<i4", count=n * k, offset=offset).reshape(n, k)
    offset += ordinals.nbytes
    distances = np.frombuffer(raw, dtype="<f4", count=n * k, offset=offset).reshape(n, k)
    return NeighborIndex(
        space, k, tuple(doc_ids), ordinals.astype(np.int32), distances.astype(np.float32)
    )


def _write_layout(path: Path, layout: LayoutCoordinates) -> None:
    import csv

    with open(path, "w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["doc_id", "x", "y"])
        for doc_id, (x, y) in zip(layout.doc_ids, layout.coords.tolist()):
            writer.writerow([doc_id, repr(x), repr(y)])


def save_bundle(bundle: CorpusBundle, out_dir, force: bool = False) -> Path:
    out = Path(out_dir)
    if out.exists() and any(out.iterdir()) and not force:
        raise BundleError(f"output directory {out} is not empty (use force to overwrite)")
    (out / "spaces").mkdir(parents=True, exist_ok=True)
    (out / "knn").mkdir(parents=True, exist_ok=True)

    _write_documents(out / "documents.jsonl", bundle.documents)
    _write_tokenized(out / "tokenized.bin", bundle.tokenized, bundle.vocabulary)
    vocab_obj = {
        "terms": list(bundle.vocabulary.terms),
        "df_g": bundle.vocabulary.df_g.tolist(),
        "n_g": bundle.vocabulary.n_g,
    }
    (out / "vocab.json").write_text(json.dumps(vocab_obj, ensure_ascii=False), encoding="utf-8")
    for name, space in bundle.spaces.items():
        _write_space(out / "spaces" / f"{name}.vec", space)
    for name, index in bundle.neighbor_indices.items():
        _write_knn(out / "knn" / f"{name}.bin", index)
    _write_layout(out / "layout.csv", bundle.layout)

    manifest = dict(bundle.manifest)
    files = ["documents.jsonl", "tokenized.bin", "vocab.json", "layout.csv"]
    files += [f"spaces/{name}.vec" for name in bundle.spaces]
    files += [f"knn/{name}.bin" for name in bundle.neighbor_indices]
    manifest["checksums"] = {rel: _sha256(out / rel) for rel in sorted(files)}
    (out / "manifest.json").write_text(
        json.dumps(manifest, ensure_ascii=False, indent=2, sort_keys=True), encoding="utf-8"
    )
    return out


def load_bundle(bundle_dir, verify: bool = True) -> CorpusBundle:
    root = Path(bundle_dir)
    manifest_path = root / "manifest.json"
    if not manifest_path.is_file():
        raise BundleError(f"not a bundle directory (no manifest.json): {root}")
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))

    checksums = manifest.get("checksums", {})
    for rel, expected in sorted(checksums.items()):
        target = root / rel
        if not target.is_file():
            raise BundleError(f"bundle file missing: {rel}")
        if verify:
            actual = _sha256(target)
            if actual != expected:
                raise BundleError(
                    f"checksum mismatch for {rel}: manifest says {expected}, file is {actual}"
                )

    opts_obj = manifest.get("options", {})
    options = IngestOptions(
        stopword_list=frozenset(opts_obj.get("stopwords", [])),
        min_token_length=int(opts_obj.get("min_token_length", 2)),
        knn_k=int(opts_obj.get("knn_k", 100)),
        layout_method=opts_obj.get("layout_method", "builtin-svd"),
        layout_path=opts_obj.get("layout_path"),
        grid_bins=int(opts_obj.get("grid_bins", 40)),
        cell_term_metric=opts_obj.get("cell_term_metric", "g2"),
        cell_term_count=int(opts_obj.get("cell_term_count", 5)),
    )

    documents = _read_documents(root / "documents.jsonl")
    doc_ids = tuple(d.doc_id for d in documents)
    vocab_obj = json.loads((root / "vocab.json").read_text(encoding="utf-8"))
    vocab = Vocabulary(
        terms=tuple(vocab_obj["terms"]),
        df_g=np.asarray(vocab_obj["df_g"], dtype=np.int64),
        n_g=int(vocab_obj["n_g"]),
    )
    tokenized = _read_tokenized(root / "tokenized.bin", documents, vocab)

    spaces = {}
    for vec_path in sorted((root / "spaces").glob("*.vec")):
        spaces[vec_path.stem] = _read_space(vec_path, vec_path.stem, doc_ids)
    if "tfidf" not in spaces:
        raise BundleError(f"bundle at {root} has no tfidf space")
    neighbor_indices = {}
    for knn_path in sorted((root / "knn").glob("*.bin")):
        neighbor_indices[knn_path.stem] = _read_knn(knn_path, knn_path.stem, doc_ids)

    layout = import_layout(root / "layout.csv", doc_ids)
    search_index = index_from_components(documents, tokenized, options)

    return CorpusBundle(
        name=manifest.get("name", root.name),
        documents=documents,
        tokenized=tokenized,
        vocabulary=vocab,
        spaces=spaces,
        neighbor_indices=neighbor_indices,
        layout=layout,
        search_index=search_index,
        options=options,
        manifest=manifest,
    )


def read_dense_vectors(path) -> dict[str, np.ndarray]:
    """Read an external embedding file: csv rows (doc_id,f32...) or .npz with
    'doc_ids' and 'vectors' arrays."""
    path = Path(path)
    if not path.is_file():
        raise IngestError(f"embedding file not found: {path}")
    rows: dict[str, np.ndarray] = {}
    if path.suffix == ".npz":
        archive = np.load(path, allow_pickle=False)
        if "doc_ids" not in archive or "vectors" not in archive:
            raise IngestError(f"{path}: npz must contain doc_ids and vectors arrays")
        ids = [str(d) for d in archive["doc_ids"].tolist()]
        vectors = np.asarray(archive["vectors"], dtype=np.float32)
        if len(ids) != len(vectors):
            raise IngestError(f"{path}: doc_ids and vectors lengths differ")
        for doc_id, vec in zip(ids, vectors):
            if doc_id in rows:
                raise IngestError(f"{path}: duplicated doc_id {doc_id!r}")
            rows[doc_id] = vec
        return rows
    import csv as _csv

    with open(path, encoding="utf-8", newline="") as handle:
        for lineno, row in enumerate(_csv.reader(handle), start=1):
            if not row or (lineno == 1 and row[0] == "doc_id"):
                continue
            doc_id = row[0]
            if doc_id in rows:
                raise IngestError(f"{path}:{lineno}: duplicated doc_id {doc_id!r}")
            try:
                rows[doc_id] = np.asarray([float(v) for v in row[1:]], dtype=np.float32)
            except ValueError:
                raise IngestError(f"{path}:{lineno}: non-numeric component")
    if not rows:
        raise IngestError(f"{path}: no vector rows found")
    return rows
