"""Reference partitioners: exhaustive optimum, random, and a greedy heuristic.

The exhaustive search is the ground truth for small instances; random
partitioning is the baseline the spectral method is measured against; the
greedy set-overlap heuristic is a non-spectral comparison point.
"""

from __future__ import annotations

from itertools import combinations
from math import factorial

import numpy as np

from .clustering import make_capacities
from .data import Dataset
from .exceptions import InstanceTooLargeError
from .partition import Partition

ENUMERATION_GUARD = 10_000_000


def count_partitions(n: int, k: int) -> int:
    """Number of set partitions into the make_capacities size profile."""
    sizes = make_capacities(n, k)
    total = factorial(n)
    for s in sizes:
        total //= factorial(int(s))
    _, group_counts = np.unique(sizes, return_counts=True)
    for c in group_counts:
        total //= factorial(int(c))
    return total


def brute_force_optimal(dataset: Dataset, k: int) -> tuple[Partition, int]:
    """Exhaustively minimize the distinct-count objective.

    Enumerates every set partition with the balanced size profile exactly
    once by always opening a new batch at the lowest unassigned sample; this
    also makes batch labels canonical (label order follows each batch's
    minimum member), so the lexicographic tie-break acts directly on the
    enumerated assignment vectors.
    """
    n = dataset.n
    total = count_partitions(n, k)
    if total > ENUMERATION_GUARD:
        raise InstanceTooLargeError(
            f"{total} partitions exceed the enumeration guard ({ENUMERATION_GUARD})"
        )
    sets = [frozenset(s.descriptions.tolist()) for s in dataset.samples]
    sizes = sorted(make_capacities(n, k).tolist(), reverse=True)

    best_obj: int | None = None
    best_assignment: tuple[int, ...] | None = None
    assignment = [-1] * n

    def recurse(unassigned: list[int], remaining_sizes: tuple[int, ...], acc: int):
        nonlocal best_obj, best_assignment
        if not unassigned:
            key = tuple(assignment)
            if best_obj is None or acc < best_obj or (acc == best_obj and key < best_assignment):
                best_obj = acc
                best_assignment = key
            return
        anchor = unassigned[0]
        rest = unassigned[1:]
        batch_label = k - len(remaining_sizes)
        tried: set[int] = set()
        for idx, size in enumerate(remaining_sizes):
            if size in tried:
                continue
            tried.add(size)
            next_sizes = remaining_sizes[:idx] + remaining_sizes[idx + 1:]
            for mates in combinations(rest, size - 1):
                union = sets[anchor]
                for m in mates:
                    union |= sets[m]
                assignment[anchor] = batch_label
                for m in mates:
                    assignment[m] = batch_label
                mates_set = set(mates)
                recurse(
                    [u for u in rest if u not in mates_set],
                    next_sizes,
                    acc + len(union),
                )
                for m in mates:
                    assignment[m] = -1
                assignment[anchor] = -1

    recurse(list(range(n)), tuple(sizes), 0)
    part = Partition(assignment=np.array(best_assignment, dtype=np.int64), k=k)
    return part, int(best_obj)


def random_partition(n: int, k: int, seed: int = 0) -> Partition:
    """Uniform random permutation chunked into balanced batch sizes."""
    caps = make_capacities(n, k)
    perm = np.random.default_rng(seed).permutation(n)
    assignment = np.empty(n, dtype=np.int64)
    start = 0
    for b, size in enumerate(caps):
        assignment[perm[start:start + size]] = b
        start += size
    return Partition(assignment=assignment, k=k)


def greedy_partition(dataset: Dataset, k: int) -> Partition:
    """Largest-set-first greedy packing by overlap with the batch union.

    Samples are processed in descending set size (ties by index). Each goes
    to the non-full batch sharing the most descriptions with its current
    union; ties prefer the emptier batch, then the lower index.
    """
    n = dataset.n
    caps = make_capacities(n, k)
    order = np.argsort(-dataset.set_sizes(), kind="stable")
    unions: list[set[int]] = [set() for _ in range(k)]
    fill = np.zeros(k, dtype=np.int64)
    assignment = np.empty(n, dtype=np.int64)
    for i in order:
        sample = set(dataset.samples[i].descriptions.tolist())
        best = None
        best_key = None
        for b in range(k):
            if fill[b] == caps[b]:
                continue
            key = (-len(sample & unions[b]), int(fill[b]), b)
            if best_key is None or key < best_key:
                best_key = key
                best = b
        assignment[i] = best
        unions[best] |= sample
        fill[best] += 1
    return Partition(assignment=assignment, k=k)
