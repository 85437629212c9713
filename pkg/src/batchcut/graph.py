"""Intersection-weighted similarity graph over samples.

Vertices are samples; the weight of edge (i, j) is the number of
descriptions the two samples share. Construction goes through an inverted
index so the cost is quadratic in posting sizes instead of in n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .data import Dataset
from .partition import Partition, check_partition

# Flush accumulated vertex pairs into CSR once this many are buffered.
_PAIR_CHUNK = 4_000_000


@dataclass
class InvertedIndex:
    """Per-description posting lists of the samples containing it."""

    postings: list[np.ndarray]
    num_samples: int

    @property
    def num_descriptions(self) -> int:
        return len(self.postings)

    def total_postings(self) -> int:
        return int(sum(p.size for p in self.postings))


@dataclass
class SimilarityGraph:
    """Sparse symmetric graph with exact integer intersection weights."""

    matrix: sp.csr_matrix  # full symmetric storage, zero diagonal, int64 data
    degrees: np.ndarray
    total_pairwise_weight: int

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def num_edges(self) -> int:
        return self.matrix.nnz // 2

    def weight(self, i: int, j: int) -> int:
        if i == j:
            return 0
        return int(self.matrix[i, j])

    def edges(self):
        """Yield (i, j, w) with i < j, ordered by (i, j)."""
        coo = sp.triu(self.matrix, k=1).tocoo()
        order = np.lexsort((coo.col, coo.row))
        for r, c, w in zip(coo.row[order], coo.col[order], coo.data[order]):
            yield int(r), int(c), int(w)


def build_index(dataset: Dataset) -> InvertedIndex:
    """Invert the dataset: postings[t] lists the samples containing t, ascending."""
    n = dataset.n
    m = dataset.num_descriptions
    sizes = dataset.set_sizes()
    if sizes.sum() == 0:
        return InvertedIndex(
            postings=[np.empty(0, dtype=np.int64) for _ in range(m)], num_samples=n
        )
    owners = np.repeat(np.arange(n, dtype=np.int64), sizes)
    descs = np.concatenate([s.descriptions for s in dataset.samples])
    order = np.argsort(descs, kind="stable")  # stable keeps owners ascending per posting
    descs = descs[order]
    owners = owners[order]
    counts = np.bincount(descs, minlength=m)
    postings = np.split(owners, np.cumsum(counts)[:-1])
    return InvertedIndex(postings=postings, num_samples=n)


def _flush(n: int, rows: list[np.ndarray], cols: list[np.ndarray]) -> sp.csr_matrix:
    r = np.concatenate(rows)
    c = np.concatenate(cols)
    coo = sp.coo_matrix((np.ones(r.size, dtype=np.int64), (r, c)), shape=(n, n))
    return coo.tocsr()  # tocsr sums duplicate entries


def build_graph(
    dataset: Dataset,
    index: InvertedIndex | None = None,
    heavy_cutoff: float | None = None,
) -> SimilarityGraph:
    """Build the similarity graph from posting lists.

    Every pair of samples within a posting gets its edge weight incremented
    by one, so the final weight of (i, j) is the intersection cardinality of
    their description sets. Descriptions appearing in more than
    ``heavy_cutoff * n`` samples are skipped when the cutoff is set; weights
    then undercount shared near-ubiquitous descriptions, but evaluation
    metrics elsewhere stay exact because they work from the sets themselves.
    """
    if index is None:
        index = build_index(dataset)
    n = dataset.n
    limit = None if heavy_cutoff is None else heavy_cutoff * n

    upper = sp.csr_matrix((n, n), dtype=np.int64)
    rows: list[np.ndarray] = []
    cols: list[np.ndarray] = []
    buffered = 0
    triu_cache: dict[int, tuple[np.ndarray, np.ndarray]] = {}
    for post in index.postings:
        m = post.size
        if m < 2:
            continue
        if limit is not None and m > limit:
            continue
        if m not in triu_cache:
            triu_cache[m] = np.triu_indices(m, k=1)
        iu, ju = triu_cache[m]
        rows.append(post[iu])
        cols.append(post[ju])
        buffered += iu.size
        if buffered >= _PAIR_CHUNK:
            upper = upper + _flush(n, rows, cols)
            rows, cols, buffered = [], [], 0
    if rows:
        upper = upper + _flush(n, rows, cols)

    matrix = (upper + upper.T).tocsr()
    matrix.sum_duplicates()
    degrees = np.asarray(matrix.sum(axis=1)).ravel().astype(np.int64)
    total = int(degrees.sum()) // 2
    return SimilarityGraph(matrix=matrix, degrees=degrees, total_pairwise_weight=total)


def pairwise_intersection(dataset: Dataset, i: int, j: int) -> int:
    """Direct |T(i) & T(j)|, the independent check for graph weights."""
    return int(
        np.intersect1d(
            dataset.samples[i].descriptions,
            dataset.samples[j].descriptions,
            assume_unique=True,
        ).size
    )


def cut_weight(graph: SimilarityGraph, partition: Partition) -> int:
    """Total weight of edges whose endpoints fall in different batches."""
    check_partition(partition, graph.n)
    coo = graph.matrix.tocoo()
    a = partition.assignment
    cross = a[coo.row] != a[coo.col]
    return int(coo.data[cross].sum()) // 2  # symmetric storage counts each edge twice


def batch_inner_weights(graph: SimilarityGraph, partition: Partition) -> np.ndarray:
    """Per-batch sum of internal edge weights."""
    check_partition(partition, graph.n)
    coo = graph.matrix.tocoo()
    a = partition.assignment
    same = a[coo.row] == a[coo.col]
    inner = np.zeros(partition.k, dtype=np.int64)
    np.add.at(inner, a[coo.row[same]], coo.data[same])
    return inner // 2


def write_edgelist(graph: SimilarityGraph, path) -> None:
    """Dump the graph as text: header ``n m`` then ``i j w`` per edge (i < j)."""
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"{graph.n} {graph.num_edges}\n")
        for i, j, w in graph.edges():
            fh.write(f"{i} {j} {w}\n")
