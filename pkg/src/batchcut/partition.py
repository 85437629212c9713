"""Batch assignments of samples, with JSON round-tripping."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np


@dataclass
class Partition:
    """Assignment of n samples to k batches.

    ``assignment[i]`` is the batch index of sample i. Batch sizes are derived
    from the assignment; for partitions produced by the balanced algorithms
    they equal the requested capacities exactly.
    """

    assignment: np.ndarray
    k: int
    _sizes: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.assignment = np.asarray(self.assignment, dtype=np.int64)
        if self.assignment.ndim != 1:
            raise ValueError("assignment must be a 1-D array of batch indices")
        if self.k < 1:
            raise ValueError("k must be >= 1")
        if self.assignment.size and (
            self.assignment.min() < 0 or self.assignment.max() >= self.k
        ):
            raise ValueError("assignment contains batch indices outside [0, k)")
        self.assignment.setflags(write=False)
        self._sizes = np.bincount(self.assignment, minlength=self.k)

    @property
    def n(self) -> int:
        return self.assignment.size

    @property
    def capacities(self) -> np.ndarray:
        """Actual batch sizes, indexed by batch."""
        return self._sizes

    def batches(self) -> list[np.ndarray]:
        """Sample indices per batch, ascending within each batch."""
        order = np.argsort(self.assignment, kind="stable")
        bounds = np.cumsum(self._sizes)[:-1]
        return np.split(order, bounds)

    def to_json_dict(self) -> dict:
        return {
            "k": int(self.k),
            "batches": [b.tolist() for b in self.batches()],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "Partition":
        k = int(obj["k"])
        batches = obj["batches"]
        if len(batches) != k:
            raise ValueError(f"expected {k} batches, found {len(batches)}")
        n = sum(len(b) for b in batches)
        assignment = np.full(n, -1, dtype=np.int64)
        for b, members in enumerate(batches):
            for i in members:
                if not 0 <= i < n or assignment[i] >= 0:
                    raise ValueError(f"sample {i} missing, repeated, or out of range")
                assignment[i] = b
        return cls(assignment=assignment, k=k)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(self.to_json_dict(), fh, sort_keys=True, indent=2)
            fh.write("\n")

    @classmethod
    def load(cls, path) -> "Partition":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


def check_partition(partition: Partition, n: int) -> None:
    """Raise if the partition does not cover exactly samples 0..n-1."""
    if partition.n != n:
        raise ValueError(
            f"partition covers {partition.n} samples, expected {n}"
        )
