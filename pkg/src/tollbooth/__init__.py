"""Exact minimum-tollbooth solver for series-parallel networks with linear latencies."""

from .errors import (
    CapExceeded,
    InfeasibleFlow,
    InvalidNetwork,
    LengthTooSmall,
    NoUsedEdge,
    NoUsedPath,
    NotACover,
    NotAPartition,
    NotOptimalFlow,
    NotSeriesParallel,
    ParseError,
    PathExplosion,
    TollboothError,
)
from .flows import (
    Flow,
    LinearLatency,
    LInstance,
    TollVector,
    build_l_instance,
    compute_equilibrium,
    compute_social_optimum,
    effective_latency,
    social_cost,
    verify_opt_inducing,
    verify_social_optimum,
    verify_wardrop,
)
from .mintb import INF, EdgeLengthList, solve_l_instance, solve_mintb
from .network import Edge, Leaf, Network, Parallel, Series, build_parse_tree, enumerate_st_paths
