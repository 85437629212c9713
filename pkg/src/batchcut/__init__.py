"""batchcut: capacity-constrained spectral partitioning of training batches.

Groups samples that share textual knowledge descriptions into equal-size
batches so each distinct description is encoded once per batch. The
pipeline builds an intersection-weighted similarity graph, embeds it
spectrally, and solves a balanced assignment with capacitated k-means.
"""

from .baselines import brute_force_optimal, count_partitions, greedy_partition, random_partition
from .clustering import (
    KMeansTrace,
    assign_step,
    balanced_kmeans,
    make_capacities,
    update_step,
)
from .costs import CostBreakdown, CostParams, batch_cost, partition_cost, speedup
from .data import (
    Dataset,
    Sample,
    TriggerLexicon,
    generate_planted,
    load_dataset,
    load_lexicon,
    match_triggers,
    truncate_descriptions,
    write_dataset,
)
from .embedding import (
    SpectralEmbedding,
    embed,
    normalized_affinity,
    top_eigenpairs,
    write_embedding_csv,
)
from .estimators import BalancedSpectralPartitioner, CapacitatedKMeans, dataset_from_sets
from .exceptions import (
    DatasetFormatError,
    EigenConvergenceError,
    InstanceTooLargeError,
    UndefinedCorrelationError,
)
from .graph import (
    InvertedIndex,
    SimilarityGraph,
    batch_inner_weights,
    build_graph,
    build_index,
    cut_weight,
    pairwise_intersection,
    write_edgelist,
)
from .metrics import (
    PartitionReport,
    cut_identity,
    expected_overlap,
    objective,
    partition_report,
    per_batch_distinct,
    trace_correlation,
    upper_bound,
    write_trace_csv,
)
from .partition import Partition, check_partition

__version__ = "0.1.0"

__all__ = [
    "BalancedSpectralPartitioner",
    "CapacitatedKMeans",
    "CostBreakdown",
    "CostParams",
    "Dataset",
    "DatasetFormatError",
    "EigenConvergenceError",
    "InstanceTooLargeError",
    "InvertedIndex",
    "KMeansTrace",
    "Partition",
    "PartitionReport",
    "Sample",
    "SimilarityGraph",
    "SpectralEmbedding",
    "TriggerLexicon",
    "UndefinedCorrelationError",
    "assign_step",
    "balanced_kmeans",
    "batch_cost",
    "batch_inner_weights",
    "brute_force_optimal",
    "build_graph",
    "build_index",
    "check_partition",
    "count_partitions",
    "cut_identity",
    "cut_weight",
    "dataset_from_sets",
    "embed",
    "expected_overlap",
    "generate_planted",
    "greedy_partition",
    "load_dataset",
    "load_lexicon",
    "make_capacities",
    "match_triggers",
    "normalized_affinity",
    "objective",
    "pairwise_intersection",
    "partition_cost",
    "partition_report",
    "per_batch_distinct",
    "random_partition",
    "speedup",
    "top_eigenpairs",
    "trace_correlation",
    "truncate_descriptions",
    "update_step",
    "upper_bound",
    "write_dataset",
    "write_edgelist",
    "write_embedding_csv",
    "write_trace_csv",
]
