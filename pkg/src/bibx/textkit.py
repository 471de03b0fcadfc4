"""Text utilities: tokenization, stopwords, n-grams, TF-IDF, frequencies.

The sparse document-term matrix is built from scratch (rows of sorted
(column, value) pairs) so the vectorization can be checked entrywise
against a dense brute-force computation.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field

import numpy as np

from .corpus import Corpus
from .errors import AnalysisUnavailableError, UsageError

# embedded English stopword list; override with a one-word-per-line file
STOPWORDS = frozenset(
    """
a about above after again against all almost also although always am among an
and any are as at back be because been before being below between both but
by can cannot could did do does doing down during each either enough etc even
ever every few first for from further had has have having he her here hers
herself him himself his how however i if in instead into is it its itself just
last least less like made make many may me might more moreover most much must
my myself neither never nevertheless new no nor not nothing now of off often on
once one only onto or other others otherwise our ours ourselves out over own
per perhaps rather same she should since so some still such than that the their
theirs them themselves then there therefore these they this those though
through thus to together too toward towards under until up upon us used using
very via was we well were what when where whether which while who whom whose
why will with within without would yet you your yours yourself yourselves
""".split()
)

_TOKEN_RE = re.compile(r"[^\W_]+(?:-[^\W_]+)*", re.UNICODE)
_NUMBER_RE = re.compile(r"^[\d.,-]+$")


@dataclass
class TokenStream:
    tokens: list[str]
    source_field: str = "abstract"


@dataclass
class SparseMatrix:
    """Row-per-document term matrix; rows hold (col, value) sorted by col."""

    n_rows: int
    n_cols: int
    vocabulary: list[str]
    rows: list[list[tuple[int, float]]] = field(default_factory=list)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros((self.n_rows, self.n_cols))
        for i, row in enumerate(self.rows):
            for j, value in row:
                dense[i, j] = value
        return dense

    def export_text(self) -> str:
        """Market-style export: `rows cols nnz` header then triplets."""
        nnz = sum(len(r) for r in self.rows)
        lines = [f"{self.n_rows} {self.n_cols} {nnz}"]
        for i, row in enumerate(self.rows):
            for j, value in row:
                lines.append(f"{i} {j} {value!r}")
        return "\n".join(lines) + "\n"


def load_stopwords(path) -> frozenset[str]:
    with open(path, encoding="utf-8") as fh:
        return frozenset(w.strip().lower() for w in fh if w.strip())


def tokenize(text: str, stopwords=STOPWORDS, source_field="abstract") -> TokenStream:
    """Lowercase word tokens; hyphens inside words survive, stopwords,
    pure numbers, and one-character tokens do not."""
    tokens = []
    for token in _TOKEN_RE.findall(text.lower()):
        if len(token) < 2:
            continue
        if _NUMBER_RE.match(token):
            continue
        if token in stopwords:
            continue
        tokens.append(token)
    return TokenStream(tokens=tokens, source_field=source_field)


def ngrams(streams, n: int) -> dict[str, int]:
    """Hyphen-joined n-gram counts; windows never cross stream boundaries."""
    if n < 1:
        raise UsageError("ngrams: n must be >= 1")
    if isinstance(streams, TokenStream):
        streams = [streams]
    counts: dict[str, int] = {}
    for stream in streams:
        tokens = stream.tokens
        for i in range(len(tokens) - n + 1):
            gram = "-".join(tokens[i : i + n])
            counts[gram] = counts.get(gram, 0) + 1
    return counts


def field_text(doc, field_name: str) -> str:
    if field_name == "abstract":
        return doc.abstract
    if field_name == "title":
        return doc.title
    if field_name == "author_keywords":
        return " ".join(doc.author_keywords)
    if field_name == "keywords_plus":
        return " ".join(doc.keywords_plus)
    raise UsageError(f"unknown text field: {field_name}")


def tfidf_from_streams(streams: list[TokenStream]) -> SparseMatrix:
    """TF-IDF with smoothed idf ln((1+N)/(1+df)) + 1 and L2-normalized rows."""
    n_docs = len(streams)
    df: dict[str, int] = {}
    for stream in streams:
        for term in set(stream.tokens):
            df[term] = df.get(term, 0) + 1
    vocabulary = sorted(df)
    col_of = {t: j for j, t in enumerate(vocabulary)}
    idf = {
        t: math.log((1 + n_docs) / (1 + df[t])) + 1.0 for t in vocabulary
    }
    rows: list[list[tuple[int, float]]] = []
    for stream in streams:
        tf: dict[str, int] = {}
        for term in stream.tokens:
            tf[term] = tf.get(term, 0) + 1
        entries = [(col_of[t], count * idf[t]) for t, count in tf.items()]
        norm = math.sqrt(sum(v * v for _, v in entries))
        if norm > 0:
            entries = [(j, v / norm) for j, v in entries]
        rows.append(sorted(entries))
    return SparseMatrix(
        n_rows=n_docs, n_cols=len(vocabulary), vocabulary=vocabulary, rows=rows
    )


def tfidf(corpus: Corpus, field_name: str = "abstract", stopwords=STOPWORDS) -> SparseMatrix:
    """Document-term TF-IDF over one text field; rows cover all documents."""
    streams = [
        tokenize(field_text(d, field_name), stopwords, field_name)
        for d in corpus.documents
    ]
    usable = sum(1 for s in streams if s.tokens)
    if usable < 2:
        raise AnalysisUnavailableError(
            f"tfidf needs >= 2 documents with a non-empty {field_name}"
        )
    return tfidf_from_streams(streams)


def word_frequencies(
    corpus: Corpus, field_name: str, top_n: int = 50, stopwords=STOPWORDS
) -> dict[str, int]:
    """Unigram counts for wordclouds; keyword fields count whole phrases."""
    counts: dict[str, int] = {}
    if field_name in ("author_keywords", "keywords_plus"):
        for doc in corpus.documents:
            values = (
                doc.author_keywords
                if field_name == "author_keywords"
                else doc.keywords_plus
            )
            for phrase in values:
                counts[phrase] = counts.get(phrase, 0) + 1
    else:
        for doc in corpus.documents:
            for token in tokenize(field_text(doc, field_name), stopwords).tokens:
                counts[token] = counts.get(token, 0) + 1
    ranked = sorted(counts.items(), key=lambda kv: (-kv[1], kv[0]))
    return dict(ranked[:top_n])
