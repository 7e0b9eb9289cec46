"""Channel-assignment performance prediction and capacity estimation for mesh networks."""

__version__ = "0.1.0"

from .assignment import (
    ChannelAssignment,
    check_assignment,
    link_channel_set,
    link_channel_sets,
    uniform_assignment,
)
from .ca import CaClass, GDCA, GPCA, TPCA, brute_force_best, classify, forward_correct, gcaa
from .conflict import (
    EMMCG,
    MMCG,
    ConflictGraph,
    RadioLink,
    TidCalculator,
    build_conflict_graph,
    interference_degree,
    total_interference_degree,
)
from .errors import (
    CorrectionFailureError,
    InvalidArgumentError,
    MeshcalmError,
    NotFoundError,
    ParseError,
    TooLargeError,
    UnboundedProblemError,
)
from .evaluation import Ranking, eis, moa, rank_by_metric, round_moa, spread
from .metrics import (
    CalmReport,
    LinkRecord,
    build_link_records,
    build_link_records_from_channels,
    calm,
    calm_from_channels,
    cdal_cost,
    cdal_cost_from_channels,
    cxls_wt,
    cxls_wt_from_channels,
    prob_conflicts,
)
from .netcap import (
    CapacityEstimate,
    FlowProblem,
    build_problem,
    scenario_grid,
    solve,
)
from .pipeline import RunManifest, parse_inputs, run_pipeline
from .topology import (
    Link,
    Node,
    Topology,
    adjacent_links,
    gen_grid,
    infer_grid_dims,
    network_density,
    validate,
)

__all__ = [
    "CaClass",
    "CalmReport",
    "CapacityEstimate",
    "ChannelAssignment",
    "ConflictGraph",
    "CorrectionFailureError",
    "EMMCG",
    "FlowProblem",
    "GDCA",
    "GPCA",
    "InvalidArgumentError",
    "Link",
    "LinkRecord",
    "MMCG",
    "MeshcalmError",
    "Node",
    "NotFoundError",
    "ParseError",
    "RadioLink",
    "Ranking",
    "RunManifest",
    "TPCA",
    "TidCalculator",
    "TooLargeError",
    "Topology",
    "UnboundedProblemError",
    "adjacent_links",
    "brute_force_best",
    "build_conflict_graph",
    "build_link_records",
    "build_link_records_from_channels",
    "build_problem",
    "calm",
    "calm_from_channels",
    "cdal_cost",
    "cdal_cost_from_channels",
    "check_assignment",
    "classify",
    "cxls_wt",
    "cxls_wt_from_channels",
    "eis",
    "forward_correct",
    "gcaa",
    "gen_grid",
    "infer_grid_dims",
    "interference_degree",
    "link_channel_set",
    "link_channel_sets",
    "moa",
    "network_density",
    "parse_inputs",
    "prob_conflicts",
    "rank_by_metric",
    "round_moa",
    "run_pipeline",
    "scenario_grid",
    "solve",
    "spread",
    "total_interference_degree",
    "uniform_assignment",
    "validate",
]
