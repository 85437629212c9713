import numpy as np
import pytest

from batchcut import (
    CostParams,
    Partition,
    batch_cost,
    dataset_from_sets,
    objective,
    partition_cost,
    random_partition,
    speedup,
)


class TestBatchCost:
    def test_knowledge_only_arithmetic(self):
        params = CostParams(seq_len=16, hidden_dim=8)
        assert batch_cost(4, 2, params).total == 4 * 256 * 8 == 8192

    def test_zero_distinct(self):
        assert batch_cost(0, 4, CostParams(seq_len=16, hidden_dim=8)).total == 0

    def test_target_term(self):
        params = CostParams(seq_len=4, hidden_dim=2, include_target=True)
        cost = batch_cost(3, 5, params)
        assert cost.knowledge == 3 * 16 * 2
        assert cost.target == 5 * 16 * 2

    def test_integration_term(self):
        params = CostParams(seq_len=4, hidden_dim=2, include_integration=True)
        cost = batch_cost(3, 2, params, per_sample_counts=[2, 3])
        assert cost.integration == (4 + 9) * 2
        with pytest.raises(ValueError, match="per_sample_counts"):
            batch_cost(3, 2, params)

    def test_negative_counts_rejected(self):
        with pytest.raises(ValueError):
            batch_cost(-1, 2, CostParams())


class TestSpeedup:
    def test_fixture_ratio(self, four_sample_dataset, good_partition, bad_partition):
        assert speedup(four_sample_dataset, bad_partition, good_partition) == pytest.approx(7 / 4)

    def test_identical_partitions(self, four_sample_dataset, good_partition):
        assert speedup(four_sample_dataset, good_partition, good_partition) == pytest.approx(1.0)

    def test_knowledge_only_equals_objective_ratio(self):
        rng = np.random.default_rng(2)
        sets = [set(rng.choice(20, size=5).tolist()) for _ in range(12)]
        ds = dataset_from_sets(sets)
        a = random_partition(12, 3, seed=0)
        b = random_partition(12, 3, seed=1)
        assert speedup(ds, a, b) == pytest.approx(objective(ds, a) / objective(ds, b))

    def test_partition_independent_terms_dilute_ratio(self, four_sample_dataset,
                                                      good_partition, bad_partition):
        lean = speedup(four_sample_dataset, bad_partition, good_partition)
        full = speedup(
            four_sample_dataset,
            bad_partition,
            good_partition,
            CostParams(include_target=True, include_integration=True),
        )
        assert 1.0 < full < lean

    def test_partition_cost_itemization(self, four_sample_dataset, good_partition):
        params = CostParams(seq_len=2, hidden_dim=3, include_target=True,
                            include_integration=True)
        cost = partition_cost(four_sample_dataset, good_partition, params)
        unit = 4 * 3
        assert cost.knowledge == 4 * unit
        assert cost.target == 4 * unit
        # set sizes are 2,2,2,1 regardless of the partition
        assert cost.integration == (4 + 4 + 4 + 1) * 3
        assert cost.total == cost.knowledge + cost.target + cost.integration
