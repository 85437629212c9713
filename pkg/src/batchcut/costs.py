"""Operation-count model of encoder compute per batch.

Costs are abstract units proportional to transformer FLOPs: encoding one
description of length L into dimension D costs L^2 D, so a batch that must
encode c distinct descriptions pays c L^2 D. Optional terms add the target
sentence encodings (one per sample) and the per-sample integration cost,
which scales with the square of the sample's own description count. Only
the knowledge term depends on the partition, so knowledge-only speedups
reduce exactly to objective ratios.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .data import Dataset
from .metrics import per_batch_distinct
from .partition import Partition


@dataclass
class CostParams:
    seq_len: int = 32
    hidden_dim: int = 64
    include_target: bool = False
    include_integration: bool = False

    def __post_init__(self):
        if self.seq_len < 1 or self.hidden_dim < 1:
            raise ValueError("seq_len and hidden_dim must be >= 1")


@dataclass
class CostBreakdown:
    knowledge: int
    target: int
    integration: int

    @property
    def total(self) -> int:
        return self.knowledge + self.target + self.integration


def batch_cost(
    distinct_count: int,
    batch_size: int,
    params: CostParams,
    per_sample_counts=None,
) -> CostBreakdown:
    """Cost units for one batch.

    ``per_sample_counts`` are the description counts of the batch members
    before in-batch dedup; they feed the integration term and are required
    when ``include_integration`` is set.
    """
    if distinct_count < 0 or batch_size < 0:
        raise ValueError("counts must be non-negative")
    unit = params.seq_len ** 2 * params.hidden_dim
    knowledge = distinct_count * unit
    target = batch_size * unit if params.include_target else 0
    integration = 0
    if params.include_integration:
        if per_sample_counts is None:
            raise ValueError("per_sample_counts required for the integration term")
        counts = np.asarray(per_sample_counts, dtype=np.int64)
        integration = int((counts ** 2).sum()) * params.hidden_dim
    return CostBreakdown(knowledge=int(knowledge), target=int(target), integration=integration)


def partition_cost(dataset: Dataset, partition: Partition, params: CostParams) -> CostBreakdown:
    """Summed cost units over all batches of a partition."""
    distinct = per_batch_distinct(dataset, partition)
    sizes = partition.capacities
    set_sizes = dataset.set_sizes()
    knowledge = 0
    target = 0
    integration = 0
    for b in range(partition.k):
        counts = set_sizes[partition.assignment == b] if params.include_integration else None
        cost = batch_cost(int(distinct[b]), int(sizes[b]), params, counts)
        knowledge += cost.knowledge
        target += cost.target
        integration += cost.integration
    return CostBreakdown(knowledge=knowledge, target=target, integration=integration)


def speedup(
    dataset: Dataset,
    partition_a: Partition,
    partition_b: Partition,
    params: CostParams | None = None,
) -> float:
    """Cost ratio of partition_a over partition_b; above 1 means b is cheaper.

    With the default knowledge-only params the ratio equals the objective
    ratio exactly (the L^2 D factor cancels).
    """
    params = params if params is not None else CostParams()
    a = partition_cost(dataset, partition_a, params).total
    b = partition_cost(dataset, partition_b, params).total
    if b == 0:
        raise ValueError("partition_b has zero total cost; ratio undefined")
    return a / b
