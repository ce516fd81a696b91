"""corpex: an explorable text-corpus engine.

Builds immutable corpus bundles (tokenization, tf-idf vectors, exact kNN,
2D map, search index) and serves salience-based explanations of documents,
neighborhoods, and map regions over a stateless HTTP JSON API and a CLI.
"""

__version__ = "0.1.0"

from .errors import CorpexError
from .ingest import IngestOptions, build_bundle, load_corpus_source
from .model import CorpusBundle, DocumentRecord, validate_bundle

__all__ = [
    "CorpexError",
    "CorpusBundle",
    "DocumentRecord",
    "IngestOptions",
    "build_bundle",
    "load_corpus_source",
    "validate_bundle",
    "__version__",
]
