"""Operator entry points: build bundles, serve them, emit headless reports.

Exit codes: 0 success, 1 usage error, 2 data error. Machine output is JSON
on stdout, byte-identical to the matching HTTP endpoint; --pretty is for
humans only.
"""

from __future__ import annotations

import json
import sys
import time

import click

from . import __version__, reports
from .errors import CorpexError
from .reports import Explorer, dumps


def _emit(payload, pretty: bool) -> None:
    if pretty:
        click.echo(json.dumps(payload, ensure_ascii=False, indent=2))
    else:
        # exact UTF-8 bytes, byte-identical to the HTTP response body
        sys.stdout.buffer.write(dumps(payload).encode("utf-8"))
        sys.stdout.flush()


def _load_explorer(bundle_dir: str) -> Explorer:
    from .bundle_io import load_bundle

    return Explorer(load_bundle(bundle_dir))


@click.group()
@click.version_option(__version__)
def cli():
    """Explorable text-corpus engine."""


@cli.command()
@click.option("--input", "input_path", required=True, type=click.Path(), help="Corpus source file.")
@click.option("--format", "fmt", type=click.Choice(["jsonl", "csv", "bibtex"]), default="jsonl", show_default=True)
@click.option("--out", "out_dir", required=True, type=click.Path(), help="Bundle directory to write.")
@click.option("--knn-k", default=100, show_default=True, help="Neighbors precomputed per document.")
@click.option("--layout", "layout_spec", default="svd", show_default=True, help="svd or import:PATH")
@click.option("--bins", default=40, show_default=True, help="Heatmap grid bins per axis.")
@click.option("--embeddings", multiple=True, metavar="NAME=PATH", help="Dense space to import; repeatable.")
@click.option("--name", default=None, help="Corpus name recorded in the manifest.")
@click.option("--min-token-length", default=2, show_default=True)
@click.option("--stopwords", "stopwords_path", type=click.Path(exists=True), default=None, help="Override stopword list, one word per line.")
@click.option("--force", is_flag=True, help="Overwrite a non-empty output directory.")
def ingest(input_path, fmt, out_dir, knn_k, layout_spec, bins, embeddings, name, min_token_length, stopwords_path, force):
    """Precompute a corpus bundle from a bibliography file."""
    from pathlib import Path

    from .bundle_io import save_bundle
    from .ingest import IngestOptions, LAYOUT_IMPORT, LAYOUT_SVD, build_bundle, load_corpus_source
    from .text import DEFAULT_STOPWORDS

    if layout_spec == "svd":
        layout_method, layout_path = LAYOUT_SVD, None
    elif layout_spec.startswith("import:"):
        layout_method, layout_path = LAYOUT_IMPORT, layout_spec.split(":", 1)[1]
    else:
        raise click.UsageError("--layout must be 'svd' or 'import:PATH'")

    embedding_files = {}
    for spec in embeddings:
        space_name, sep, path = spec.partition("=")
        if not sep or not space_name or not path:
            raise click.UsageError(f"--embeddings needs NAME=PATH, got {spec!r}")
        embedding_files[space_name] = path

    stopwords = DEFAULT_STOPWORDS
    if stopwords_path:
        words = Path(stopwords_path).read_text(encoding="utf-8").split()
        stopwords = frozenset(w.lower() for w in words)

    started = time.monotonic()
    loaded = load_corpus_source(input_path, fmt)
    opts = IngestOptions(
        stopword_list=stopwords,
        min_token_length=min_token_length,
        knn_k=knn_k,
        layout_method=layout_method,
        layout_path=layout_path,
        grid_bins=bins,
    )
    bundle = build_bundle(
        loaded.records,
        opts,
        embeddings=embedding_files or None,
        name=name or Path(input_path).stem,
    )
    save_bundle(bundle, out_dir, force=force)
    elapsed = time.monotonic() - started
    click.echo(
        f"bundle written to {out_dir}: {bundle.n_g} documents"
        f" ({loaded.dropped_empty} dropped for empty body),"
        f" {len(bundle.vocabulary)} terms, spaces: {', '.join(bundle.spaces)};"
        f" {elapsed:.1f}s"
    )


@cli.command()
@click.option("--bundle", "bundle_dir", required=True, envvar="CORPEX_BUNDLE", type=click.Path())
@click.option("--port", default=8000, show_default=True, envvar="CORPEX_PORT")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--cors-origin", multiple=True, default=("*",), show_default=True)
def serve(bundle_dir, port, host, cors_origin):
    """Serve the HTTP JSON API for one bundle."""
    import uvicorn

    from .service import create_app

    explorer = _load_explorer(bundle_dir)
    explorer.grid  # warm the cell-term precompute before accepting requests
    app = create_app(explorer, cors_origin)
    click.echo(
        f"ready: corpus {explorer.bundle.name!r} ({explorer.bundle.n_g} documents)"
        f" on http://{host}:{port}"
    )
    uvicorn.run(app, host=host, port=port, log_level="warning")


@cli.command()
@click.option("--bundle", "bundle_dir", required=True, envvar="CORPEX_BUNDLE", type=click.Path())
@click.option("--region-cell", default=None, metavar="I,J", help="Explain one heatmap cell.")
@click.option("--pair", default=None, metavar="A,B", help="Explain a document pair.")
@click.option("--neighborhood", default=None, metavar="DOC", help="Explain a document's neighborhood.")
@click.option("--space", default="tfidf", show_default=True)
@click.option("--term-metric", default="g2", show_default=True)
@click.option("--doc-metric", default="centrality", show_default=True)
@click.option("--kappa", default=1.0, show_default=True)
@click.option("--n", default=reports.DEFAULT_NEIGHBORS, show_default=True)
@click.option("--pretty", is_flag=True)
def explain(bundle_dir, region_cell, pair, neighborhood, space, term_metric, doc_metric, kappa, n, pretty):
    """Emit the same JSON payload as the matching HTTP endpoint."""
    from .layout import CellRegion

    selectors = [s for s in (region_cell, pair, neighborhood) if s]
    if len(selectors) != 1:
        raise click.UsageError("pass exactly one of --region-cell, --pair, --neighborhood")
    explorer = _load_explorer(bundle_dir)
    if region_cell:
        try:
            i, j = (int(v) for v in region_cell.split(","))
        except ValueError:
            raise click.UsageError(f"--region-cell needs I,J integers, got {region_cell!r}")
        payload = reports.region_report(
            explorer, CellRegion(i, j), term_metric, doc_metric, kappa, space
        )
    elif pair:
        parts = pair.split(",")
        if len(parts) != 2:
            raise click.UsageError(f"--pair needs A,B doc ids, got {pair!r}")
        payload = reports.pair_report(explorer, parts[0], parts[1])
    else:
        payload = reports.neighborhood_report(
            explorer, neighborhood, space=space, n=n, term_metric=term_metric
        )
    _emit(payload, pretty)


@cli.command()
@click.option("--bundle", "bundle_dir", required=True, envvar="CORPEX_BUNDLE", type=click.Path())
@click.option("--doc", required=True, help="Document id.")
@click.option("--space", default="tfidf", show_default=True)
@click.option("--n", default=reports.DEFAULT_NEIGHBORS, show_default=True)
@click.option("--pretty", is_flag=True)
def knn(bundle_dir, doc, space, n, pretty):
    """Print a document's precomputed nearest neighbors."""
    explorer = _load_explorer(bundle_dir)
    _emit(reports.neighbors_payload(explorer, doc, space, n), pretty)


@cli.command()
@click.option("--bundle", "bundle_dir", required=True, envvar="CORPEX_BUNDLE", type=click.Path())
@click.option("--query", default=None, help="Keyword query.")
@click.option("--text-file", type=click.Path(exists=True), default=None, help="Similarity search for this file's text instead of keywords.")
@click.option("--mode", type=click.Choice(["any", "all", "any-term", "all-terms"]), default="any", show_default=True)
@click.option("--sort", type=click.Choice(["relevance", "distance", "year"]), default="relevance", show_default=True)
@click.option("--anchor", default=None, help="Anchor doc id for --sort distance.")
@click.option("--space", default="tfidf", show_default=True)
@click.option("--n", default=50, show_default=True)
@click.option("--pretty", is_flag=True)
def search(bundle_dir, query, text_file, mode, sort, anchor, space, n, pretty):
    """Keyword search, or similarity search for pasted text."""
    from pathlib import Path

    from .spaces import similarity_for_text

    if (query is None) == (text_file is None):
        raise click.UsageError("pass exactly one of --query or --text-file")
    explorer = _load_explorer(bundle_dir)
    if text_file:
        text = Path(text_file).read_text(encoding="utf-8")
        results = similarity_for_text(explorer.bundle, text, space, n)
        payload = {
            "space": space,
            "n": n,
            "results": [{"doc_id": d, "distance": dist} for d, dist in results],
        }
    else:
        payload = reports.search_report(explorer, query, mode, sort, anchor, space, n)
    _emit(payload, pretty)


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
        return 0
    except click.UsageError as exc:
        click.echo(f"usage error: {exc.format_message()}", err=True)
        return 1
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.Abort:
        return 1
    except CorpexError as exc:
        click.echo(f"error: {exc}", err=True)
        return 2


if __name__ == "__main__":
    sys.exit(main())
