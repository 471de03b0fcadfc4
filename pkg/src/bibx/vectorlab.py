"""Dimensionality reduction and clustering.

Randomized truncated SVD (block power iteration, oversampling 10, seven
power passes) and seeded k-means++ with Lloyd refinement. Both are
deterministic for a fixed seed; singular vectors carry a sign convention
(largest-magnitude component positive) so factorizations are unique.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .corpus import Corpus
from .errors import DataError, UsageError
from .textkit import SparseMatrix, tfidf

OVERSAMPLING = 10
POWER_ITERATIONS = 7


@dataclass
class Factorization:
    u: np.ndarray
    s: np.ndarray
    vt: np.ndarray
    k: int


@dataclass
class Clustering:
    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    seed: int
    n_iterations: int = 0
    inertia_history: list[float] = field(default_factory=list)


@dataclass
class Projection2D:
    coordinates: np.ndarray  # (n, 2)
    method: str
    cluster_labels: Optional[np.ndarray] = None
    metadata: list[dict] = field(default_factory=list)


def _as_array(matrix) -> np.ndarray:
    if isinstance(matrix, SparseMatrix):
        return matrix.to_dense()
    return np.asarray(matrix, dtype=float)


def tsvd(matrix, k: int, seed: int = 42) -> Factorization:
    """Top-k singular triplets via seeded randomized block power iteration."""
    a = _as_array(matrix)
    n, m = a.shape
    if not 1 <= k <= min(n, m):
        raise UsageError(f"tsvd: k={k} out of range for a {n}x{m} matrix")
    rng = np.random.default_rng(seed)
    block = min(k + OVERSAMPLING, min(n, m))
    omega = rng.standard_normal((m, block))
    y = a @ omega
    for _ in range(POWER_ITERATIONS):
        y, _ = np.linalg.qr(y)
        y = a @ (a.T @ y)
    q, _ = np.linalg.qr(y)
    b = q.T @ a
    ub, s, vt = np.linalg.svd(b, full_matrices=False)
    u = q @ ub
    u, s, vt = u[:, :k], s[:k], vt[:k]
    # sign convention: each right singular vector's peak component positive
    for i in range(k):
        peak = np.argmax(np.abs(vt[i]))
        if vt[i, peak] < 0:
            vt[i] = -vt[i]
            u[:, i] = -u[:, i]
    return Factorization(u=u, s=s, vt=vt, k=k)


def kmeans(
    points,
    k: int,
    seed: int = 42,
    max_iter: int = 300,
    tol: float = 1e-6,
) -> Clustering:
    """Seeded k-means++ initialization followed by Lloyd iterations.

    An emptied cluster is re-seeded to the point farthest from its
    assigned centroid; determinism holds for a fixed seed.
    """
    x = np.asarray(points, dtype=float)
    if x.ndim == 1:
        x = x[:, None]
    n = len(x)
    if k > n:
        raise UsageError(f"kmeans: k={k} exceeds point count {n}")
    if k < 1:
        raise UsageError("kmeans: k must be >= 1")
    rng = np.random.default_rng(seed)
    centroids = _plus_plus_init(x, k, rng)
    labels = np.zeros(n, dtype=int)
    history: list[float] = []
    n_iter = 0
    for n_iter in range(1, max_iter + 1):
        dists = _sq_distances(x, centroids)
        labels = np.argmin(dists, axis=1)
        new_centroids = centroids.copy()
        for j in range(k):
            members = x[labels == j]
            if len(members):
                new_centroids[j] = members.mean(axis=0)
            else:
                worst = int(np.argmax(dists[np.arange(n), labels]))
                new_centroids[j] = x[worst]
                labels[worst] = j
        inertia = float(
            np.sum((x - new_centroids[labels]) ** 2)
        )
        history.append(inertia)
        shift = float(np.max(np.linalg.norm(new_centroids - centroids, axis=1)))
        centroids = new_centroids
        if shift < tol:
            break
    dists = _sq_distances(x, centroids)
    labels = np.argmin(dists, axis=1)
    inertia = float(np.sum((x - centroids[labels]) ** 2))
    return Clustering(
        labels=labels,
        centroids=centroids,
        inertia=inertia,
        seed=seed,
        n_iterations=n_iter,
        inertia_history=history,
    )


def _plus_plus_init(x: np.ndarray, k: int, rng) -> np.ndarray:
    n = len(x)
    centroids = np.empty((k, x.shape[1]))
    first = int(rng.integers(n))
    centroids[0] = x[first]
    closest = np.sum((x - centroids[0]) ** 2, axis=1)
    for j in range(1, k):
        total = closest.sum()
        if total <= 0:
            idx = int(rng.integers(n))
        else:
            probs = closest / total
            idx = int(rng.choice(n, p=probs))
        centroids[j] = x[idx]
        closest = np.minimum(closest, np.sum((x - centroids[j]) ** 2, axis=1))
    return centroids


def _sq_distances(x: np.ndarray, centroids: np.ndarray) -> np.ndarray:
    diffs = x[:, None, :] - centroids[None, :, :]
    return np.sum(diffs * diffs, axis=2)


def silhouette_mean(x: np.ndarray, labels: np.ndarray) -> float:
    """Mean silhouette coefficient (Euclidean)."""
    n = len(x)
    uniq = np.unique(labels)
    if len(uniq) < 2:
        return -1.0
    diffs = x[:, None, :] - x[None, :, :]
    dist = np.sqrt(np.sum(diffs * diffs, axis=2))
    scores = np.zeros(n)
    for i in range(n):
        own = labels[i]
        same = labels == own
        same[i] = False
        if not same.any():
            scores[i] = 0.0  # singleton cluster: silhouette undefined
            continue
        a = dist[i, same].mean()
        b = min(
            dist[i, labels == other].mean()
            for other in uniq
            if other != own
        )
        denom = max(a, b)
        scores[i] = 0.0 if denom == 0 else (b - a) / denom
    return float(scores.mean())


def load_vectors(path, expected_rows: int | None = None) -> np.ndarray:
    """Load external embedding vectors (CSV or whitespace-delimited).

    A leading non-numeric header line is ignored; ragged rows and row-count
    mismatches are reported with positions.
    """
    rows: list[list[float]] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",") if "," in line else line.split()
            try:
                values = [float(p) for p in parts]
            except ValueError:
                if lineno == 1 and not rows:
                    continue  # header
                raise DataError(f"{path}: non-numeric value on line {lineno}")
            if rows and len(values) != len(rows[0]):
                raise DataError(f"{path}: ragged row on line {lineno}")
            rows.append(values)
    if expected_rows is not None and len(rows) != expected_rows:
        raise UsageError(
            f"{path}: expected {expected_rows} rows, found {len(rows)}"
        )
    if not rows:
        raise DataError(f"{path}: no numeric rows")
    return np.asarray(rows)


def project2d(
    corpus: Corpus,
    vector_source: str = "tfidf",
    cluster_k: int = 2,
    seed: int = 42,
    vectors_path=None,
) -> Projection2D:
    """2-D document map: rank-2 TSVD coordinates plus k-means labels."""
    if vector_source == "tfidf":
        matrix = tfidf(corpus, "abstract")
        base = matrix.to_dense()
        method = "tsvd"
    elif vector_source == "external":
        base = load_vectors(vectors_path, expected_rows=len(corpus.documents))
        method = "external"
    else:
        raise UsageError(f"unknown vector source: {vector_source}")
    fact = tsvd(base, k=2, seed=seed)
    coords = fact.u * fact.s
    clustering = kmeans(coords, cluster_k, seed=seed)
    metadata = [
        {"doc_id": d.id, "citation": corpus.citation_string(d.id)}
        for d in corpus.documents
    ]
    return Projection2D(
        coordinates=coords,
        method=method,
        cluster_labels=clustering.labels,
        metadata=metadata,
    )
