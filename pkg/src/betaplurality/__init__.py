"""beta-plurality points in spatial voting: evaluation, construction and
approximation of the advantage factor beta(p, V)."""

from .geometry_core import (
    Cone,
    Line2,
    Point,
    Side,
    VoterSet,
    balanced_line,
    cone_partition,
    distance,
    in_convex_hull,
    sphere_cover,
)
from .decision import (
    BetaBracket,
    DepthCounts,
    Verdict,
    approx_beta_of_point,
    approx_decide,
    depth_at,
    exact_beta_of_point_2d,
    exact_decide_2d,
)
from .median_point import median_point, median_select
from .planar_optimal import (
    BalancedTriple,
    DegeneracyError,
    concurrent_triple_bisection,
    concurrent_triple_fast,
    planar_point,
)
from .approx_best import (
    BestPointResult,
    CandidateSet,
    ExpGrid,
    approx_best_point,
    candidate_count,
    candidate_set,
    exponential_grid,
)
from .oracles import oracle_best_point, oracle_decide

__version__ = "0.1.0"

__all__ = [
    "BalancedTriple",
    "BestPointResult",
    "BetaBracket",
    "CandidateSet",
    "Cone",
    "DegeneracyError",
    "DepthCounts",
    "ExpGrid",
    "Line2",
    "Point",
    "Side",
    "Verdict",
    "VoterSet",
    "approx_best_point",
    "approx_beta_of_point",
    "approx_decide",
    "balanced_line",
    "candidate_count",
    "candidate_set",
    "concurrent_triple_bisection",
    "concurrent_triple_fast",
    "cone_partition",
    "depth_at",
    "distance",
    "exact_beta_of_point_2d",
    "exact_decide_2d",
    "exponential_grid",
    "in_convex_hull",
    "median_point",
    "median_select",
    "oracle_best_point",
    "oracle_decide",
    "planar_point",
    "sphere_cover",
    "__version__",
]
