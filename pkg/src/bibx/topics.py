"""Cluster-based topic modeling.

Documents are partitioned by k-means over their vectors; each topic's
characteristic words come from a class-based TF-IDF over the cluster's
concatenated abstracts, and its central document is the member nearest
(cosine) to the cluster centroid.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .corpus import Corpus
from .errors import UsageError
from .textkit import STOPWORDS, tokenize
from .vectorlab import kmeans, silhouette_mean

TOP_WORDS = 10
AUTO_K_RANGE = range(2, 11)


@dataclass
class Topic:
    index: int
    size: int
    top_words: list[str]
    word_scores: dict[str, float]
    central_doc: int


@dataclass
class TopicModel:
    topics: list[Topic]
    assignment: np.ndarray  # per-document topic index


def class_tfidf(token_lists: list[list[str]]) -> list[dict[str, float]]:
    """Per-class term scores: tf(t, c) * ln(1 + A / f(t)).

    A is the average pseudo-document token count and f(t) the term's total
    frequency across all classes.
    """
    class_tf: list[dict[str, int]] = []
    corpus_freq: dict[str, int] = {}
    total_tokens = 0
    for tokens in token_lists:
        tf: dict[str, int] = {}
        for t in tokens:
            tf[t] = tf.get(t, 0) + 1
            corpus_freq[t] = corpus_freq.get(t, 0) + 1
        class_tf.append(tf)
        total_tokens += len(tokens)
    avg_tokens = total_tokens / len(token_lists) if token_lists else 0.0
    scores = []
    for tf in class_tf:
        scores.append(
            {
                t: count * math.log(1 + avg_tokens / corpus_freq[t])
                for t, count in tf.items()
            }
        )
    return scores


def fit_topics(
    corpus: Corpus,
    vectors,
    k="auto",
    seed: int = 42,
    stopwords=STOPWORDS,
) -> TopicModel:
    """Partition documents into topics and extract characteristic words."""
    x = np.asarray(vectors, dtype=float)
    if len(x) != len(corpus.documents):
        raise UsageError(
            f"vectors rows ({len(x)}) must match document count ({len(corpus.documents)})"
        )
    usable = sum(1 for d in corpus.documents if d.abstract.strip())
    if k == "auto":
        best_k, best_score = None, -2.0
        for candidate in AUTO_K_RANGE:
            if candidate > len(x):
                break
            clustering = kmeans(x, candidate, seed=seed)
            score = silhouette_mean(x, clustering.labels)
            if score > best_score + 1e-12:
                best_k, best_score = candidate, score
        if best_k is None:
            raise UsageError("auto-k needs at least 2 documents")
        k = best_k
    if k > usable:
        raise UsageError(f"k={k} exceeds documents with abstracts ({usable})")
    clustering = kmeans(x, k, seed=seed)
    labels = clustering.labels

    token_lists = []
    for topic_idx in range(k):
        tokens: list[str] = []
        for doc in corpus.documents:
            if labels[doc.id] == topic_idx:
                tokens.extend(tokenize(doc.abstract, stopwords).tokens)
        token_lists.append(tokens)
    scores = class_tfidf(token_lists)

    topics = []
    for topic_idx in range(k):
        members = np.flatnonzero(labels == topic_idx)
        central = _central_doc(x, members, clustering.centroids[topic_idx])
        ranked = sorted(
            scores[topic_idx].items(), key=lambda kv: (-kv[1], kv[0])
        )
        top_words = [w for w, _ in ranked[:TOP_WORDS]]
        topics.append(
            Topic(
                index=topic_idx,
                size=len(members),
                top_words=top_words,
                word_scores=dict(ranked[:TOP_WORDS]),
                central_doc=int(central),
            )
        )
    return TopicModel(topics=topics, assignment=labels)


def _central_doc(x: np.ndarray, members: np.ndarray, centroid: np.ndarray) -> int:
    best, best_cos = int(members[0]), -2.0
    c_norm = np.linalg.norm(centroid)
    for i in members:
        v = x[i]
        denom = np.linalg.norm(v) * c_norm
        cos = float(v @ centroid / denom) if denom > 0 else -1.0
        if cos > best_cos + 1e-15:
            best, best_cos = int(i), cos
    return best


def topic_summary(model: TopicModel, corpus: Corpus) -> list[tuple]:
    """Table rows: (index, size, joined top words, central doc citation)."""
    rows = []
    for topic in model.topics:
        rows.append(
            (
                topic.index,
                topic.size,
                ", ".join(topic.top_words),
                corpus.citation_string(topic.central_doc),
            )
        )
    return rows


def to_json_dict(model: TopicModel) -> dict:
    return {
        "topics": [
            {
                "index": t.index,
                "size": t.size,
                "top_words": t.top_words,
                "word_scores": t.word_scores,
                "central_doc": t.central_doc,
            }
            for t in model.topics
        ],
        "assignment": [int(a) for a in model.assignment],
    }
