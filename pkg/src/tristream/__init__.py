"""Triangle counting for insertion-only edge streams.

One-pass sampling estimators (combined vertex+edge sampling and the
baselines it generalizes), an exact triangle oracle, hard-instance graph
generators, median-of-means amplification, and a benchmark harness.
"""

from .amplification import MedianOfMeansResult, ReplicationPlan, median_of_means, replication_plan
from .errors import ParameterError, ParseError, TristreamError, ValidationError
from .estimators import (
    ColorfulEstimator,
    EstimateReport,
    OptEstimator,
    TkmfEstimator,
    select_params,
    variance_bound,
    vertex_estimator,
    wedge_estimator,
)
from .generators import (
    gen_book,
    gen_complete,
    gen_disjoint,
    gen_er,
    gen_friendship,
    order_stream,
)
from .graphs import (
    EdgeStream,
    Graph,
    GraphStats,
    exact_triangle_count,
    graph_stats,
    load_edge_list,
    materialize,
    to_edge_list_text,
)
from .hashing import (
    MERSENNE61,
    EdgeSampler,
    VertexSampler,
    make_edge_sampler,
    make_vertex_sampler,
    mix_seed,
)

__version__ = "0.1.0"

__all__ = [
    "ColorfulEstimator",
    "EdgeSampler",
    "EdgeStream",
    "EstimateReport",
    "Graph",
    "GraphStats",
    "MERSENNE61",
    "MedianOfMeansResult",
    "OptEstimator",
    "ParameterError",
    "ParseError",
    "ReplicationPlan",
    "TkmfEstimator",
    "TristreamError",
    "ValidationError",
    "VertexSampler",
    "exact_triangle_count",
    "gen_book",
    "gen_complete",
    "gen_disjoint",
    "gen_er",
    "gen_friendship",
    "graph_stats",
    "load_edge_list",
    "make_edge_sampler",
    "make_vertex_sampler",
    "materialize",
    "median_of_means",
    "mix_seed",
    "order_stream",
    "replication_plan",
    "select_params",
    "to_edge_list_text",
    "variance_bound",
    "vertex_estimator",
    "wedge_estimator",
]
