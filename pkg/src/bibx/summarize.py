"""Extractive summarization by centrality over a sentence-similarity graph.

Sentences are vectorized with TF-IDF, a cosine-similarity graph is built,
and a damped power iteration (damping 0.85, 50 passes, uniform start)
yields stationary importance weights. Selected sentences are re-emitted
in source order, verbatim.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .corpus import Corpus
from .errors import AnalysisUnavailableError, UsageError
from .textkit import STOPWORDS, TokenStream, tfidf_from_streams, tokenize

DAMPING = 0.85
ITERATIONS = 50

# trailing abbreviations that do not end a sentence
ABBREVIATIONS = (
    "al.",  # et al.
    "fig.",
    "figs.",
    "vol.",
    "no.",
    "eq.",
    "eqs.",
    "e.g.",
    "i.e.",
    "cf.",
    "vs.",
    "dr.",
    "prof.",
    "etc.",
    "resp.",
    "approx.",
)

_BOUNDARY_RE = re.compile(r"([.!?])\s+(?=[A-Z0-9(\"'])")


@dataclass
class Summary:
    sentences: list[str]
    doc_ids: list[int]
    scores: list[float] = field(default_factory=list)


def split_sentences(text: str) -> list[str]:
    """Split on ./!/? followed by whitespace and an uppercase start, with
    an abbreviation guard."""
    if not text.strip():
        return []
    sentences = []
    start = 0
    for m in _BOUNDARY_RE.finditer(text):
        candidate = text[start : m.end(1)]
        tail = candidate.rsplit(None, 1)[-1].lower() if candidate.split() else ""
        if tail in ABBREVIATIONS or _is_initial(tail):
            continue
        sentence = candidate.strip()
        if sentence:
            sentences.append(sentence)
        start = m.end()
    last = text[start:].strip()
    if last:
        sentences.append(last)
    return sentences


def _is_initial(token: str) -> bool:
    # "j." or "j.-c." style author initials
    return bool(re.fullmatch(r"(?:[a-z]\.-?)+", token))


def sentence_scores(sentences: list[str]) -> list[float]:
    """Stationary centrality weights over the cosine-similarity graph."""
    n = len(sentences)
    if n == 1:
        return [1.0]
    streams = [
        TokenStream(tokenize(s, STOPWORDS).tokens or ["_empty_"]) for s in sentences
    ]
    dense = tfidf_from_streams(streams).to_dense()
    sim = dense @ dense.T
    np.fill_diagonal(sim, 0.0)
    row_sums = sim.sum(axis=1)
    transition = np.full((n, n), 1.0 / n)
    for i in range(n):
        if row_sums[i] > 0:
            transition[i] = sim[i] / row_sums[i]
    weights = np.full(n, 1.0 / n)
    for _ in range(ITERATIONS):
        weights = (1 - DAMPING) / n + DAMPING * (transition.T @ weights)
    weights = weights / weights.sum()
    return [float(w) for w in weights]


def extractive_summary(
    corpus: Corpus, doc_ids: list[int], n_sentences: int = 3
) -> Summary:
    """Top-scoring sentences from the given abstracts, in source order."""
    if n_sentences < 1:
        raise UsageError("n_sentences must be >= 1")
    sentences: list[str] = []
    for doc_id in doc_ids:
        if not 0 <= doc_id < len(corpus.documents):
            raise UsageError(f"invalid document id {doc_id}")
        sentences.extend(split_sentences(corpus.documents[doc_id].abstract))
    if not sentences:
        raise AnalysisUnavailableError("no abstract sentences to summarize")
    scores = sentence_scores(sentences)
    # rank by score descending, then earlier position; emit in source order
    ranked = sorted(range(len(sentences)), key=lambda i: (-scores[i], i))
    chosen = sorted(ranked[:n_sentences])
    return Summary(
        sentences=[sentences[i] for i in chosen],
        doc_ids=list(doc_ids),
        scores=[scores[i] for i in chosen],
    )
