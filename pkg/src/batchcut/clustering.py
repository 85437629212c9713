"""Capacity-constrained k-means over embedding points.

The assignment step differs from plain k-means: all sample-to-center
distances are sorted globally in ascending order and swept once, assigning
each still-unassigned sample to the first center in the sweep that has
spare capacity. Because the capacities sum to the sample count, the sweep
always terminates with every sample placed and every batch filled exactly.

The constrained objective is not guaranteed to decrease under this greedy
step, so convergence is declared when the assignment stops changing (with a
repeat-state guard against longer cycles) rather than by objective descent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial.distance import cdist

from .partition import Partition


@dataclass
class TraceRecord:
    iteration: int
    mean_centroid_distance: float
    partition: Partition


@dataclass
class KMeansTrace:
    """Per-iteration snapshots recorded during clustering."""

    records: list[TraceRecord] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.records)

    def mean_distances(self) -> np.ndarray:
        return np.array([r.mean_centroid_distance for r in self.records])

    def partitions(self) -> list[Partition]:
        return [r.partition for r in self.records]


def _as_points(points) -> np.ndarray:
    pts = getattr(points, "points", points)
    pts = np.asarray(pts, dtype=np.float64)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-D array")
    return pts


def make_capacities(n: int, k: int) -> np.ndarray:
    """Batch sizes as equal as possible: n mod k batches get the ceiling."""
    if k < 1 or k > n:
        raise ValueError(f"k={k} outside [1, n={n}]")
    base, extra = divmod(n, k)
    caps = np.full(k, base, dtype=np.int64)
    caps[:extra] += 1
    return caps


def _check_capacities(capacities, n: int, k: int) -> np.ndarray:
    caps = np.asarray(capacities, dtype=np.int64)
    if caps.shape != (k,):
        raise ValueError(f"capacities must have length k={k}")
    if caps.min() < 1:
        raise ValueError("every capacity must be >= 1")
    if caps.sum() < n:
        raise ValueError(f"capacities sum to {int(caps.sum())} < n={n}")
    return caps


def _greedy_sweep(sq_dists: np.ndarray, capacities: np.ndarray) -> np.ndarray:
    """Assign samples in globally ascending (distance, sample, center) order."""
    n, k = sq_dists.shape
    # Stable sort of the row-major flattening breaks distance ties by
    # (sample index, center index), matching the documented order.
    order = np.argsort(sq_dists.ravel(), kind="stable")
    assignment = np.full(n, -1, dtype=np.int64)
    free = capacities.copy()
    remaining = n
    for flat in order:
        i = flat // k
        if assignment[i] >= 0:
            continue
        j = flat - i * k
        if free[j] == 0:
            continue
        assignment[i] = j
        free[j] -= 1
        remaining -= 1
        if remaining == 0:
            break
    return assignment


def assign_step(points, centers: np.ndarray, capacities) -> Partition:
    """One capacity-constrained assignment pass.

    Squared Euclidean distances are used for the sort; squaring is monotone
    so the sweep order is the Euclidean one.
    """
    pts = _as_points(points)
    centers = np.asarray(centers, dtype=np.float64)
    if not np.all(np.isfinite(centers)):
        raise ValueError("centers must be finite")
    k = centers.shape[0]
    caps = _check_capacities(capacities, pts.shape[0], k)
    sq = cdist(pts, centers, metric="sqeuclidean")
    return Partition(assignment=_greedy_sweep(sq, caps), k=k)


def update_step(points, partition: Partition) -> np.ndarray:
    """New centers: the mean of each batch's assigned points."""
    pts = _as_points(points)
    sizes = partition.capacities
    if sizes.min() == 0:
        empty = int(np.argmin(sizes))
        raise ValueError(f"batch {empty} is empty; centers undefined")
    centers = np.zeros((partition.k, pts.shape[1]))
    np.add.at(centers, partition.assignment, pts)
    return centers / sizes[:, None]


def _init_centers(pts: np.ndarray, k: int, rng: np.random.Generator, init: str) -> np.ndarray:
    n = pts.shape[0]
    if init == "random":
        idx = rng.choice(n, size=k, replace=False)
        return pts[idx].copy()
    if init == "++":
        # k-means++ style seeding, kept behind a flag; plain uniform choice
        # of k nodes is the default behaviour.
        centers = np.empty((k, pts.shape[1]))
        centers[0] = pts[int(rng.integers(n))]
        closest = np.full(n, np.inf)
        for c in range(1, k):
            d2 = np.sum((pts - centers[c - 1]) ** 2, axis=1)
            closest = np.minimum(closest, d2)
            total = closest.sum()
            if total <= 0:
                centers[c] = pts[int(rng.integers(n))]
                continue
            probs = closest / total
            centers[c] = pts[int(rng.choice(n, p=probs))]
        return centers
    raise ValueError(f"unknown init {init!r}")


def balanced_kmeans(
    points,
    k: int,
    capacities=None,
    seed: int = 0,
    max_iter: int = 100,
    trace: bool = False,
    init: str = "random",
) -> tuple[Partition, KMeansTrace | None]:
    """Run capacity-constrained k-means to a fixed assignment.

    Centers start at k distinct points sampled uniformly with ``seed``.
    Iterations alternate the greedy capacitated assignment and the mean
    update, stopping when the assignment repeats the previous one, when any
    earlier assignment recurs (cycle guard), or at ``max_iter``.
    """
    pts = _as_points(points)
    n = pts.shape[0]
    if k > n:
        raise ValueError(f"k={k} exceeds number of points {n}")
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    caps = make_capacities(n, k) if capacities is None else _check_capacities(capacities, n, k)

    rng = np.random.default_rng(seed)
    centers = _init_centers(pts, k, rng, init)
    history = KMeansTrace() if trace else None

    if k == 1:
        # A single center must receive every point, so the assignment is
        # independent of the center location: converged after one pass.
        part = Partition(assignment=np.zeros(n, dtype=np.int64), k=1)
        if history is not None:
            dist = float(np.linalg.norm(pts - centers[0], axis=1).mean())
            history.records.append(TraceRecord(0, dist, part))
        return part, history

    prev: np.ndarray | None = None
    seen: set[bytes] = set()
    part = None
    for it in range(max_iter):
        sq = cdist(pts, centers, metric="sqeuclidean")
        assignment = _greedy_sweep(sq, caps)
        part = Partition(assignment=assignment, k=k)
        if history is not None:
            chosen = sq[np.arange(n), assignment]
            dist = float(np.sqrt(np.maximum(chosen, 0.0)).mean())
            history.records.append(TraceRecord(it, dist, part))
        if prev is not None and np.array_equal(assignment, prev):
            break
        key = assignment.tobytes()
        if key in seen:
            break
        seen.add(key)
        prev = assignment
        centers = update_step(pts, part)
    return part, history
