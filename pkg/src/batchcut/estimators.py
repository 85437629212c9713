"""scikit-learn style estimators wrapping the partitioning pipeline.

``CapacitatedKMeans`` clusters numeric points under exact per-cluster
capacities. ``BalancedSpectralPartitioner`` runs the whole pipeline, from
description sets to balanced batches: similarity graph, spectral embedding,
capacitated k-means. Both follow the fit/fit_predict contract and expose
get_params/set_params, so they compose with pipelines and grid search.
"""

from __future__ import annotations

import numbers

import numpy as np
from sklearn.base import BaseEstimator, ClusterMixin

from . import clustering, embedding, graph as simgraph
from .data import Dataset, Sample
from .validation import as_dataset, check_points


def _seed_from(random_state) -> int | None:
    if random_state is None or isinstance(random_state, numbers.Integral):
        return None if random_state is None else int(random_state)
    raise ValueError("random_state must be an int or None")


class CapacitatedKMeans(ClusterMixin, BaseEstimator):
    """K-means with exact per-cluster capacities.

    The assignment step sorts every (point, center) distance globally and
    fills centers greedily, never exceeding a center's capacity, so final
    cluster sizes match the capacities exactly.

    Parameters
    ----------
    n_clusters : int
        Number of clusters.
    capacities : array-like of shape (n_clusters,), optional
        Cluster sizes. Defaults to the most even split of the sample count.
    max_iter : int
        Iteration cap; the loop also stops when assignments repeat.
    init : {"random", "++"}
        Center initialization; "random" picks k distinct training points.
    random_state : int, optional
        Seed for initialization; fixes the whole run.
    record_trace : bool
        Keep per-iteration snapshots in ``trace_``.

    Attributes
    ----------
    labels_ : ndarray of shape (n_samples,)
    cluster_centers_ : ndarray of shape (n_clusters, n_features)
    capacities_ : ndarray of shape (n_clusters,)
    n_iter_ : int
    trace_ : KMeansTrace or None
    """

    def __init__(
        self,
        n_clusters=8,
        capacities=None,
        max_iter=100,
        init="random",
        random_state=None,
        record_trace=False,
    ):
        self.n_clusters = n_clusters
        self.capacities = capacities
        self.max_iter = max_iter
        self.init = init
        self.random_state = random_state
        self.record_trace = record_trace

    def fit(self, X, y=None):
        pts = check_points(X)
        part, trace = clustering.balanced_kmeans(
            pts,
            k=self.n_clusters,
            capacities=self.capacities,
            seed=_seed_from(self.random_state),
            max_iter=self.max_iter,
            trace=True,
            init=self.init,
        )
        self.labels_ = part.assignment
        self.partition_ = part
        self.capacities_ = part.capacities
        self.cluster_centers_ = clustering.update_step(pts, part)
        self.n_iter_ = trace.records[-1].iteration + 1
        self.trace_ = trace if self.record_trace else None
        return self


class BalancedSpectralPartitioner(ClusterMixin, BaseEstimator):
    """Partition samples into equal-size batches of shared descriptions.

    Fitting builds the intersection-weighted similarity graph, embeds it
    with the top eigenvectors of the normalized affinity, and runs
    capacitated k-means on the embedding. ``labels_`` maps every sample to
    its batch; batch sizes differ by at most one (exactly the batch size
    when it divides the sample count).

    Parameters
    ----------
    batch_size : int, optional
        Target samples per batch; the batch count becomes ceil(n / s).
        Exactly one of ``batch_size``/``n_batches`` must be given.
    n_batches : int, optional
        Number of batches.
    n_components : int
        Embedding dimension; the effective value is min(n_components,
        n_batches, n_samples). 8 is a good default even for many batches.
    heavy_cutoff : float, optional
        Skip descriptions held by more than this fraction of samples when
        building the graph.
    max_iter : int
        Clustering iteration cap.
    init : {"random", "++"}
        Center initialization.
    random_state : int, optional
        Seed for the eigensolver start vector and center initialization.
    record_trace : bool
        Keep per-iteration clustering snapshots in ``trace_``.
    eig_tol : float
        Residual tolerance for the eigensolver.
    strict_eigensolver : bool
        Raise when the eigensolver misses ``eig_tol``; by default it warns
        and proceeds with the best-effort embedding, which is the intended
        behaviour for large graphs where the truncated embedding is an
        approximation anyway.

    Attributes
    ----------
    labels_ : ndarray of shape (n_samples,)
    capacities_ : ndarray of shape (n_batches_,)
    n_batches_ : int
    cluster_centers_ : ndarray
    graph_ : SimilarityGraph
    embedding_ : SpectralEmbedding
    n_iter_ : int
    trace_ : KMeansTrace or None
    """

    def __init__(
        self,
        batch_size=None,
        n_batches=None,
        n_components=8,
        heavy_cutoff=None,
        max_iter=100,
        init="random",
        random_state=None,
        record_trace=False,
        eig_tol=embedding.DEFAULT_TOL,
        strict_eigensolver=False,
    ):
        self.batch_size = batch_size
        self.n_batches = n_batches
        self.n_components = n_components
        self.heavy_cutoff = heavy_cutoff
        self.max_iter = max_iter
        self.init = init
        self.random_state = random_state
        self.record_trace = record_trace
        self.eig_tol = eig_tol
        self.strict_eigensolver = strict_eigensolver

    def _resolve_k(self, n: int) -> int:
        if (self.batch_size is None) == (self.n_batches is None):
            raise ValueError("specify exactly one of batch_size or n_batches")
        if self.n_batches is not None:
            k = int(self.n_batches)
        else:
            s = int(self.batch_size)
            if s < 1:
                raise ValueError("batch_size must be >= 1")
            k = -(-n // s)
        if not 1 <= k <= n:
            raise ValueError(f"batch count {k} outside [1, n={n}]")
        return k

    def fit(self, X, y=None):
        dataset = as_dataset(X)
        n = dataset.n
        k = self._resolve_k(n)
        seed = _seed_from(self.random_state)
        seed = 0 if seed is None else seed

        self.graph_ = simgraph.build_graph(dataset, heavy_cutoff=self.heavy_cutoff)
        self.embedding_ = embedding.embed(
            self.graph_,
            n_components=min(int(self.n_components), k, n),
            seed=seed,
            tol=self.eig_tol,
            on_nonconverged="raise" if self.strict_eigensolver else "warn",
        )
        capacities = clustering.make_capacities(n, k)
        part, trace = clustering.balanced_kmeans(
            self.embedding_.points,
            k=k,
            capacities=capacities,
            seed=seed,
            max_iter=self.max_iter,
            trace=True,
            init=self.init,
        )
        self.dataset_ = dataset
        self.partition_ = part
        self.labels_ = part.assignment
        self.capacities_ = part.capacities
        self.n_batches_ = k
        self.cluster_centers_ = clustering.update_step(self.embedding_.points, part)
        self.n_iter_ = trace.records[-1].iteration + 1
        self.trace_ = trace if self.record_trace else None
        return self


def dataset_from_sets(description_sets) -> Dataset:
    """Build a Dataset from an iterable of integer description sets."""
    samples = [
        Sample(sample_id=i, descriptions=np.asarray(sorted(set(map(int, s))), dtype=np.int64))
        for i, s in enumerate(description_sets)
    ]
    num = 1 + max((int(s.descriptions[-1]) for s in samples if s.descriptions.size), default=-1)
    return Dataset(samples=samples, num_descriptions=num)
