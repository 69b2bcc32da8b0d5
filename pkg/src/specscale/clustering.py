"""Label assignment on embedded samples: k-means with restarts and 1-NN."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InternalConsistencyError
from .embedding import Embedding


@dataclass
class ClusterAssignment:
    labels: np.ndarray
    inertia: float
    restarts_used: int


def _lloyd(points, k, rng, max_iter):
    n = points.shape[0]
    centroids = points[rng.choice(n, size=k, replace=False)].copy()
    labels = None
    prev_inertia = np.inf
    for _ in range(max_iter):
        d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_labels = d2.argmin(axis=1)
        # empty-cluster policy: reseed at the point farthest from its centroid
        for c in range(k):
            if not np.any(new_labels == c):
                own = d2[np.arange(n), new_labels]
                p = int(np.argmax(own))
                centroids[c] = points[p]
                new_labels[p] = c
                d2[:, c] = ((points - centroids[c]) ** 2).sum(axis=1)
        if labels is not None and np.array_equal(new_labels, labels):
            break
        labels = new_labels
        for c in range(k):
            centroids[c] = points[labels == c].mean(axis=0)
        inertia = float(((points - centroids[labels]) ** 2).sum())
        if inertia > prev_inertia + 1e-9 * (1.0 + abs(prev_inertia)):
            raise InternalConsistencyError(
                f"inertia increased across a Lloyd iteration: {prev_inertia} -> {inertia}"
            )
        prev_inertia = inertia
    d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
    labels = d2.argmin(axis=1)
    inertia = float(d2[np.arange(n), labels].sum())
    return labels, inertia


def kmeans(points, k, restarts=20, seed=0, max_iter=300) -> ClusterAssignment:
    """Lloyd's algorithm from random point initializations, best of ``restarts``.

    Each restart seeds its own generator from (seed, restart index), so the
    winner is independent of evaluation order; ties go to the earlier restart.
    """
    points = np.asarray(points, dtype=float)
    if points.ndim == 1:
        points = points[:, None]
    n = points.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k={k} out of range 1..{n}")
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    best_labels, best_inertia = None, np.inf
    for r in range(restarts):
        rng = np.random.default_rng([seed, r])
        labels, inertia = _lloyd(points, k, rng, max_iter)
        if inertia < best_inertia:
            best_labels, best_inertia = labels, inertia
    return ClusterAssignment(labels=best_labels, inertia=best_inertia,
                             restarts_used=restarts)


def nn1_classify(embedded, train_indices, train_labels, test_indices) -> np.ndarray:
    """Nearest-neighbor labels for test rows of a joint embedding.

    The embedding covers training and test samples together (it was computed
    once over all rows), so classification is transductive. Ties go to the
    smaller training index.
    """
    points = embedded.vectors if isinstance(embedded, Embedding) else np.asarray(embedded, float)
    if points.ndim == 1:
        points = points[:, None]
    train_indices = np.asarray(train_indices, dtype=int)
    test_indices = np.asarray(test_indices, dtype=int)
    train_labels = np.asarray(train_labels)
    if train_indices.size == 0:
        raise ValueError("training set is empty")
    if train_labels.shape[0] != train_indices.shape[0]:
        raise ValueError("train_labels must align with train_indices")
    combined = np.concatenate([train_indices, test_indices])
    if np.unique(combined).size != combined.size:
        raise ValueError("train and test indices overlap")
    if not np.array_equal(np.sort(combined), np.arange(points.shape[0])):
        raise ValueError("train and test indices must partition the embedding rows")

    order = np.argsort(train_indices, kind="stable")
    train_sorted = train_indices[order]
    labels_sorted = train_labels[order]
    d2 = (
        (points[test_indices][:, None, :] - points[train_sorted][None, :, :]) ** 2
    ).sum(axis=2)
    return labels_sorted[d2.argmin(axis=1)]
