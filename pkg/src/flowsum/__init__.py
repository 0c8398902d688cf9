"""Influence-graph summarization: cluster a directed influence graph and
report the strongest cluster-to-cluster flows."""

from .errors import (
    DimensionError,
    FlowsumError,
    NumericError,
    ParseError,
    SizeGuardError,
    UnknownNodeError,
    ValidationError,
)
from .graph import (
    InfluenceGraph,
    NodeMeta,
    from_edges,
    load_graph,
    maximal_influence_graph,
    reverse_edges,
)
from .pruning import SummaryCluster, SummaryFlow, SummaryGraph, mst_prune, rank_filter
from .similarity import (
    AugmentParams,
    SimilarityMatrix,
    attribute_matrix,
    baseline_kernel,
    common_neighbor,
    fuse,
    simrank,
    time_matrix,
)
from .summarize import (
    ClusterAssignment,
    FlowMatrix,
    SummarizeConfig,
    flow_matrix,
    objective,
    ranked_flows,
    summarize_pipeline,
    symnmf,
)

__version__ = "0.1.0"

__all__ = [
    "AugmentParams",
    "ClusterAssignment",
    "DimensionError",
    "FlowMatrix",
    "FlowsumError",
    "InfluenceGraph",
    "NodeMeta",
    "NumericError",
    "ParseError",
    "SimilarityMatrix",
    "SizeGuardError",
    "SummarizeConfig",
    "SummaryCluster",
    "SummaryFlow",
    "SummaryGraph",
    "UnknownNodeError",
    "ValidationError",
    "attribute_matrix",
    "baseline_kernel",
    "common_neighbor",
    "flow_matrix",
    "from_edges",
    "fuse",
    "load_graph",
    "maximal_influence_graph",
    "mst_prune",
    "objective",
    "rank_filter",
    "ranked_flows",
    "reverse_edges",
    "simrank",
    "summarize_pipeline",
    "symnmf",
    "time_matrix",
]
