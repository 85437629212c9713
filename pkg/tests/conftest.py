import numpy as np
import pytest

from batchcut import Partition, dataset_from_sets


@pytest.fixture
def four_sample_dataset():
    """Two near-duplicate pairs: the canonical small instance where a good
    pairing needs 4 encodings and a bad one needs 7."""
    return dataset_from_sets([{0, 1}, {0, 1}, {2, 3}, {2}])


@pytest.fixture
def good_partition():
    return Partition(np.array([0, 0, 1, 1]), 2)


@pytest.fixture
def bad_partition():
    return Partition(np.array([0, 1, 0, 1]), 2)


def random_dataset(rng, n, universe, max_set=8):
    """Random description sets, possibly empty."""
    cap = min(max_set, universe)
    sets = []
    for _ in range(n):
        size = int(rng.integers(0, cap + 1))
        sets.append(set(rng.choice(universe, size=size, replace=False).tolist()))
    return dataset_from_sets(sets)
