"""Hierarchical clustering of random variables with copula-based dissimilarities."""
from .cluster import DissimilaritySpec, agglomerate, run_clustering
from .core import (
    DataMatrix,
    Dendrogram,
    MergeRecord,
    Partition,
    PseudoObsMatrix,
    cut_dendrogram,
    to_pseudo_observations,
)
from .empirical import Measure, MeasureKind, dissimilarity, kendall_companion, pairwise_matrix
from .evaluation import adjusted_rand_index, rand_index
from .linkage import LinkageMethod, linkage_dissimilarity

__version__ = "0.1.0"

__all__ = [
    "DataMatrix",
    "Dendrogram",
    "DissimilaritySpec",
    "LinkageMethod",
    "Measure",
    "MeasureKind",
    "MergeRecord",
    "Partition",
    "PseudoObsMatrix",
    "adjusted_rand_index",
    "agglomerate",
    "cut_dendrogram",
    "dissimilarity",
    "kendall_companion",
    "linkage_dissimilarity",
    "pairwise_matrix",
    "rand_index",
    "run_clustering",
    "to_pseudo_observations",
]
