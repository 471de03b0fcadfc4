"""bibx: a bibliometric analysis toolkit.

Parses Scopus/Web of Science BibTeX and PubMed MEDLINE exports, merges
them into a labeled corpus, and provides descriptive statistics, citation
and collaboration networks, text analytics (TF-IDF, TSVD projection,
k-means topics, extractive summarization), an LLM question layer, and
static SVG figure rendering — as a library and a `bibx` CLI.
"""

from .corpus import Corpus, Document, EntityRegistry, assign_ids, canonicalize
from .errors import (
    AnalysisUnavailableError,
    BibxError,
    ConfigurationError,
    DataError,
    EmptyCorpusError,
    ParseError,
    ServiceError,
    UsageError,
)

__version__ = "0.1.0"

__all__ = [
    "Corpus",
    "Document",
    "EntityRegistry",
    "assign_ids",
    "canonicalize",
    "BibxError",
    "UsageError",
    "DataError",
    "ParseError",
    "EmptyCorpusError",
    "AnalysisUnavailableError",
    "ConfigurationError",
    "ServiceError",
    "__version__",
]
