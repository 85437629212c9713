"""Partition quality: the distinct-count objective, bounds, and identities.

The objective counts the distinct descriptions each batch must encode. Its
upper bound in terms of mean pairwise overlap comes in two coefficient
variants: ``"s"`` subtracts s times the mean overlap per batch and can dip
below the true count (two identical samples already break it), while
``"s_minus_1"`` subtracts s-1 times the overlap and is the sound version,
tight for disjoint sets. Both are computed so the discrepancy stays
observable; assertions default to the sound one.
"""

from __future__ import annotations

import csv
import json
from dataclasses import asdict, dataclass

import numpy as np

from .clustering import KMeansTrace
from .data import Dataset
from .exceptions import UndefinedCorrelationError
from .graph import SimilarityGraph, batch_inner_weights, cut_weight
from .partition import Partition, check_partition

COEFFICIENTS = ("s", "s_minus_1")


def per_batch_distinct(dataset: Dataset, partition: Partition) -> np.ndarray:
    """Distinct description count of every batch, by exact set union."""
    check_partition(partition, dataset.n)
    counts = np.zeros(partition.k, dtype=np.int64)
    for b, members in enumerate(partition.batches()):
        sets = [dataset.samples[i].descriptions for i in members]
        if sets:
            merged = np.concatenate(sets)
            counts[b] = np.unique(merged).size
    return counts


def objective(dataset: Dataset, partition: Partition) -> int:
    """Total number of distinct descriptions summed over batches."""
    return int(per_batch_distinct(dataset, partition).sum())


def _mean_batch_overlap(graph: SimilarityGraph, partition: Partition) -> np.ndarray:
    inner = batch_inner_weights(graph, partition)
    sizes = partition.capacities
    pairs = sizes * (sizes - 1)
    out = np.zeros(partition.k)
    nontrivial = pairs > 0
    out[nontrivial] = 2.0 * inner[nontrivial] / pairs[nontrivial]
    return out


def expected_overlap(graph: SimilarityGraph, partition: Partition) -> float:
    """Sum over batches of the mean pairwise intersection size.

    A batch of size s with internal edge weight w contributes 2w / (s(s-1));
    singleton batches contribute zero. Mixed batch sizes each use their own
    size.
    """
    return float(_mean_batch_overlap(graph, partition).sum())


def upper_bound(
    dataset: Dataset,
    graph: SimilarityGraph,
    partition: Partition,
    coefficient: str = "s_minus_1",
) -> float:
    """Overlap-discounted bound on the objective.

    Per batch: sum of set sizes minus c times the mean pairwise overlap,
    where c is the batch size (``"s"``) or the batch size minus one
    (``"s_minus_1"``, the sound default).
    """
    if coefficient not in COEFFICIENTS:
        raise ValueError(f"coefficient must be one of {COEFFICIENTS}")
    check_partition(partition, dataset.n)
    sizes = partition.capacities.astype(np.float64)
    coeff = sizes if coefficient == "s" else sizes - 1.0
    set_sizes = dataset.set_sizes()
    batch_set_sizes = np.zeros(partition.k, dtype=np.int64)
    np.add.at(batch_set_sizes, partition.assignment, set_sizes)
    overlap = _mean_batch_overlap(graph, partition)
    return float((batch_set_sizes - coeff * overlap).sum())


def cut_identity(graph: SimilarityGraph, partition: Partition) -> tuple[float, float]:
    """Check the link between batch overlap and the cut of the graph.

    For uniform batch size s, the summed mean pairwise overlap equals
    2 (total - cut) / (s (s - 1)): the edges not crossed by the partition
    are exactly the within-batch pairs. Returns (overlap sum, cut-side
    expression); callers assert equality.
    """
    sizes = partition.capacities
    if partition.k == 0 or np.unique(sizes).size != 1:
        raise ValueError("identity requires uniform batch sizes")
    s = int(sizes[0])
    if s < 2:
        raise ValueError("identity requires batch size >= 2")
    lhs = expected_overlap(graph, partition)
    w = cut_weight(graph, partition)
    rhs = 2.0 * (graph.total_pairwise_weight - w) / (s * (s - 1))
    return lhs, rhs


def trace_correlation(trace: KMeansTrace, dataset: Dataset) -> float:
    """Pearson correlation between per-iteration mean centroid distance and
    the per-iteration objective."""
    if len(trace) < 3:
        raise UndefinedCorrelationError(
            f"need at least 3 iterations, trace has {len(trace)}"
        )
    x = trace.mean_distances()
    y = np.array([objective(dataset, p) for p in trace.partitions()], dtype=np.float64)
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        raise UndefinedCorrelationError("constant series, correlation undefined")
    return float(np.corrcoef(x, y)[0, 1])


@dataclass
class PartitionReport:
    """Everything worth knowing about one partition of one dataset."""

    objective: int
    per_batch_distinct: list[int]
    sum_set_sizes: int
    expected_overlap: float
    cut_weight: int
    inner_weight: int
    total_pairwise_weight: int
    upper_bound_s_minus_1: float
    upper_bound_s: float
    bound_coefficient: str
    k: int
    capacities: list[int]

    @property
    def upper_bound(self) -> float:
        if self.bound_coefficient == "s":
            return self.upper_bound_s
        return self.upper_bound_s_minus_1

    def to_json(self) -> str:
        payload = asdict(self)
        payload["upper_bound"] = self.upper_bound
        return json.dumps(payload, sort_keys=True, indent=2)

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(self.to_json() + "\n")


def partition_report(
    dataset: Dataset,
    graph: SimilarityGraph,
    partition: Partition,
    coefficient: str = "s_minus_1",
) -> PartitionReport:
    if coefficient not in COEFFICIENTS:
        raise ValueError(f"coefficient must be one of {COEFFICIENTS}")
    distinct = per_batch_distinct(dataset, partition)
    cut = cut_weight(graph, partition)
    return PartitionReport(
        objective=int(distinct.sum()),
        per_batch_distinct=[int(c) for c in distinct],
        sum_set_sizes=int(dataset.set_sizes().sum()),
        expected_overlap=expected_overlap(graph, partition),
        cut_weight=cut,
        inner_weight=graph.total_pairwise_weight - cut,
        total_pairwise_weight=graph.total_pairwise_weight,
        upper_bound_s_minus_1=upper_bound(dataset, graph, partition, "s_minus_1"),
        upper_bound_s=upper_bound(dataset, graph, partition, "s"),
        bound_coefficient=coefficient,
        k=partition.k,
        capacities=[int(c) for c in partition.capacities],
    )


def write_trace_csv(trace: KMeansTrace, dataset: Dataset, fh) -> None:
    """Emit iteration, mean centroid distance, and objective per row."""
    writer = csv.writer(fh)
    writer.writerow(["iteration", "mean_centroid_distance", "distinct_descriptions_total"])
    for rec in trace.records:
        writer.writerow(
            [
                rec.iteration,
                f"{rec.mean_centroid_distance:.17g}",
                objective(dataset, rec.partition),
            ]
        )
