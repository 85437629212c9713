import numpy as np
import pytest

from batchcut import (
    Partition,
    build_graph,
    build_index,
    cut_weight,
    dataset_from_sets,
    pairwise_intersection,
    write_edgelist,
)
from conftest import random_dataset


class TestBuildIndex:
    def test_fixture_postings(self, four_sample_dataset):
        idx = build_index(four_sample_dataset)
        assert idx.postings[0].tolist() == [0, 1]
        assert idx.postings[2].tolist() == [2, 3]
        assert idx.total_postings() == sum(
            s.descriptions.size for s in four_sample_dataset.samples
        )

    def test_all_empty_sets(self):
        ds = dataset_from_sets([set(), set(), set()])
        idx = build_index(ds)
        assert all(p.size == 0 for p in idx.postings)

    def test_sample_with_every_description(self):
        ds = dataset_from_sets([{0, 1, 2}, {1}])
        idx = build_index(ds)
        for t in range(3):
            assert 0 in idx.postings[t].tolist()


class TestBuildGraph:
    def test_fixture_edges(self, four_sample_dataset):
        g = build_graph(four_sample_dataset)
        assert list(g.edges()) == [(0, 1, 2), (2, 3, 1)]
        assert g.total_pairwise_weight == 3
        assert g.weight(0, 1) == 2
        assert g.weight(0, 2) == 0
        assert g.degrees.tolist() == [2, 2, 1, 1]

    def test_disjoint_sets_no_edges(self):
        ds = dataset_from_sets([{0}, {1}, {2}])
        g = build_graph(ds)
        assert g.num_edges == 0

    def test_identical_sets_complete_graph(self):
        m, n = 3, 5
        ds = dataset_from_sets([{0, 1, 2}] * n)
        g = build_graph(ds)
        assert g.num_edges == n * (n - 1) // 2
        assert all(w == m for _, _, w in g.edges())
        assert g.total_pairwise_weight == m * n * (n - 1) // 2

    def test_matches_direct_pairwise_intersections(self):
        rng = np.random.default_rng(42)
        for _ in range(20):
            n = int(rng.integers(2, 31))
            ds = random_dataset(rng, n, universe=25)
            g = build_graph(ds)
            for i in range(n):
                for j in range(i + 1, n):
                    assert g.weight(i, j) == pairwise_intersection(ds, i, j)

    def test_order_independence(self):
        rng = np.random.default_rng(7)
        ds = random_dataset(rng, 15, universe=20)
        perm = rng.permutation(15)
        permuted = dataset_from_sets(
            [ds.samples[p].descriptions.tolist() for p in perm]
        )
        g = build_graph(ds)
        gp = build_graph(permuted)
        inv = np.argsort(perm)
        for i, j, w in g.edges():
            assert gp.weight(int(inv[i]), int(inv[j])) == w
        assert gp.total_pairwise_weight == g.total_pairwise_weight

    def test_heavy_cutoff_skips_frequent_description(self):
        # description 0 is in every sample; 1 and 2 are rare
        ds = dataset_from_sets([{0, 1}, {0, 1}, {0, 2}, {0, 2}])
        full = build_graph(ds)
        pruned = build_graph(ds, heavy_cutoff=0.5)
        assert full.weight(0, 1) == 2 and full.weight(0, 2) == 1
        assert pruned.weight(0, 1) == 1  # shared rare description only
        assert pruned.weight(0, 2) == 0

    def test_heavy_cutoff_at_one_keeps_everything(self, four_sample_dataset):
        g = build_graph(four_sample_dataset, heavy_cutoff=1.0)
        assert list(g.edges()) == [(0, 1, 2), (2, 3, 1)]


class TestCutWeight:
    def test_fixture_partitions(self, four_sample_dataset, good_partition, bad_partition):
        g = build_graph(four_sample_dataset)
        assert cut_weight(g, good_partition) == 0
        assert cut_weight(g, bad_partition) == 3

    def test_single_batch_no_cut(self, four_sample_dataset):
        g = build_graph(four_sample_dataset)
        assert cut_weight(g, Partition(np.zeros(4, dtype=int), 1)) == 0

    def test_partition_size_mismatch(self, four_sample_dataset):
        g = build_graph(four_sample_dataset)
        with pytest.raises(ValueError, match="covers"):
            cut_weight(g, Partition(np.array([0, 1, 0]), 2))

    def test_cut_plus_inner_is_total(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            n = int(rng.integers(4, 25))
            ds = random_dataset(rng, n, universe=15)
            g = build_graph(ds)
            k = int(rng.integers(1, n + 1))
            part = Partition(rng.integers(0, k, size=n), k)
            from batchcut import batch_inner_weights

            inner = int(batch_inner_weights(g, part).sum())
            assert cut_weight(g, part) + inner == g.total_pairwise_weight


def test_edgelist_dump(tmp_path, four_sample_dataset):
    g = build_graph(four_sample_dataset)
    path = tmp_path / "graph.txt"
    write_edgelist(g, path)
    lines = path.read_text().splitlines()
    assert lines[0] == "4 2"
    assert lines[1:] == ["0 1 2", "2 3 1"]
