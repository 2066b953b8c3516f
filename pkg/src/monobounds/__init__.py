"""Sharp bounds for binary potential outcomes with and without instrument monotonicity."""

from .analysis import (
    ConsistencyReport,
    ContentReport,
    compare_assumption_sets,
    consistency_report,
    identifying_content,
    lp_bounds_table,
    sample_consistent_P,
    sharpness_witness,
)
from .closed_form import BoundsTable, ConsistencyViolated, bounds_table, lower_bound, upper_bound
from .constraints import ate_functional, build_lp, event_functional, marginal_functional
from .lp import Direction, Infeasible, feasibility, solve
from .model import (
    AssumptionSet,
    DataDistribution,
    Event,
    Interval,
    MassFunction,
    ResponseType,
    complement,
    parse_data_distribution,
    push_forward,
)
from .polyhedra import enumerate_dual_vertices, image_membership

__all__ = [
    "AssumptionSet",
    "BoundsTable",
    "ConsistencyReport",
    "ConsistencyViolated",
    "ContentReport",
    "DataDistribution",
    "Direction",
    "Event",
    "Infeasible",
    "Interval",
    "MassFunction",
    "ResponseType",
    "ate_functional",
    "bounds_table",
    "build_lp",
    "compare_assumption_sets",
    "complement",
    "consistency_report",
    "enumerate_dual_vertices",
    "event_functional",
    "feasibility",
    "identifying_content",
    "image_membership",
    "lower_bound",
    "lp_bounds_table",
    "marginal_functional",
    "parse_data_distribution",
    "push_forward",
    "sample_consistent_P",
    "sharpness_witness",
    "solve",
    "upper_bound",
]
