"""Multi-access coded caching built on cross resolvable block designs."""

from .designs import (
    Design,
    DesignReport,
    PointBudgetError,
    block_cover_check,
    construct_mcrd,
    point_at,
    verify_mcrd,
)
from .topology import (
    GenerationError,
    MatchingAssignment,
    MatchingError,
    Topology,
    TopologyReport,
    cache_cell,
    canonical_topology,
    cell_sizes,
    count_topologies,
    extract_matchings,
    random_topology,
    validate,
)
from .engine import (
    DemandGraph,
    Placement,
    SchemeParams,
    SimulationReport,
    Summand,
    Transmission,
    UnsupportedDesignError,
    achievable_rate,
    build_demand_graph,
    cell_quotas,
    decode,
    deliver,
    place,
    simulate,
    subfile_bytes,
)
from .analysis import (
    ApplicabilityError,
    ComparisonCheck,
    Curve,
    RatePoint,
    TableRow,
    comparison_checks,
    comparison_table,
    corner_points,
    envelope,
    our_envelope,
    rival_corner_points,
    rival_envelope,
    rival_rate,
    rival_subpacketization,
)

__version__ = "0.1.0"
