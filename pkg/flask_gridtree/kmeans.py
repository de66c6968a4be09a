"""This module implements Lloyd's K-Means with deterministic farthest-point seeding.
"""

# Copyright (c) 2024 GridTree developers

from __future__ import annotations

import logging
from typing import NamedTuple, Sequence, Tuple

import numpy as np

from . import KMeansError

logger = logging.getLogger(__name__)


class KMeansResult(NamedTuple):
    assignments: Tuple[int, ...]
    centroids: Tuple[Tuple[float, float], ...]
    wcss_history: Tuple[float, ...]
    iterations: int
    converged: bool

    @property
    def wcss(self) -> float:
        return self.wcss_history[-1]


def within_cluster_sum_of_squares(points, assignments, centroids) -> float:
    points = np.asarray(points, dtype=float).reshape(-1, 2)
    centroids = np.asarray(centroids, dtype=float).reshape(-1, 2)
    offsets = points - centroids[np.asarray(assignments, dtype=int)]
    return float((offsets ** 2).sum())


def _farthest_point_init(points: np.ndarray, k: int, first: int) -> np.ndarray:
    chosen = [first]
    min_d2 = ((points - points[first]) ** 2).sum(axis=1)
    while len(chosen) < k:
        # np.argmax returns the lowest index among equal maxima
        index = int(np.argmax(min_d2))
        chosen.append(index)
        min_d2 = np.minimum(min_d2, ((points - points[index]) ** 2).sum(axis=1))
    return points[chosen].copy()


def _repair_empty(points: np.ndarray, assignments: np.ndarray, centroids: np.ndarray,
                  k: int) -> Tuple[np.ndarray, np.ndarray]:
    """Reseed every empty cluster with the point farthest from its centroid."""
    assignments = assignments.copy()
    centroids = centroids.copy()
    for j in range(k):
        if np.any(assignments == j):
            continue
        sizes = np.bincount(assignments, minlength=k)
        d2 = ((points - centroids[assignments]) ** 2).sum(axis=1)
        d2[sizes[assignments] < 2] = -1.0    # never empty another cluster
        index = int(np.argmax(d2))
        logger.debug('kmeans: reseeding empty cluster %d with point %d', j, index)
        assignments[index] = j
        centroids[j] = points[index]
    return assignments, centroids


def _lloyd(points: np.ndarray, k: int, centroids: np.ndarray, tol: float,
           max_iter: int) -> KMeansResult:
    assignments = None
    history = []
    converged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        d2 = ((points[:, None, :] - centroids[None, :, :]) ** 2).sum(axis=2)
        new_assignments = np.argmin(d2, axis=1)
        new_assignments, centroids = _repair_empty(points, new_assignments, centroids, k)
        new_centroids = np.array([points[new_assignments == j].mean(axis=0) for j in range(k)])
        history.append(within_cluster_sum_of_squares(points, new_assignments, new_centroids))

        shift = float(np.sqrt(((new_centroids - centroids) ** 2).sum(axis=1)).max())
        stable = assignments is not None and np.array_equal(new_assignments, assignments)
        centroids, assignments = new_centroids, new_assignments
        if shift <= tol or stable:
            converged = True
            break

    return KMeansResult(
        assignments=tuple(int(a) for a in assignments),
        centroids=tuple((float(x), float(y)) for x, y in centroids),
        wcss_history=tuple(history),
        iterations=iterations,
        converged=converged,
    )


def kmeans(points: Sequence[Tuple[float, float]], k: int, seed: int = 0, tol: float = 1e-9,
           max_iter: int = 100, restarts: int = 1) -> KMeansResult:
    """Partition ``points`` into ``k`` clusters with Lloyd's algorithm.

    Initial centroids are chosen farthest-point first. The first pick is drawn
    from a generator seeded with ``seed``; with ``restarts > 1`` several first
    picks are tried and the run with the smallest WCSS is kept (earliest on ties).

    Raises:
        KMeansError: ``k`` is out of range, or there are fewer distinct points than ``k``.
    """
    pts = np.asarray(points, dtype=float).reshape(-1, 2)
    n = len(pts)
    if not 1 <= k <= n:
        raise KMeansError('k must be between 1 and the number of points (%d), got %r.' % (n, k))
    if tol < 0 or max_iter < 1:
        raise KMeansError('tol must be >= 0 and max_iter >= 1.')
    if len(np.unique(pts, axis=0)) < k:
        raise KMeansError('Fewer distinct points than k=%d.' % k)

    rng = np.random.default_rng(seed % 2 ** 32)
    first_picks = rng.permutation(n)[:max(1, min(restarts, n))]

    best = None
    for first in first_picks:
        result = _lloyd(pts, k, _farthest_point_init(pts, k, int(first)), tol, max_iter)
        if best is None or result.wcss < best.wcss:
            best = result
    return best
