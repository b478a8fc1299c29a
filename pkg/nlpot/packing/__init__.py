from nlpot.packing._blocking import (
    DEFAULT_FLOOR,
    BlockingMetric,
    BlockingRadii,
    PathProfile,
    approach_paths,
    blocking_metric,
    blocking_radii,
    divergence_check,
    lens_volume,
    nearest_vertex,
    psi,
)
from nlpot.packing._contact import (
    DEFAULT_TANGENCY_TOL,
    ContactGraph,
    Overlap,
    PackingReport,
    contact_graph,
    metric_lp_norm,
    packing_metric,
    packing_metric_bound,
    verify_packing,
)
from nlpot.packing._lift import (
    LIFT_ERROR_CONSTANT,
    LiftedPacking,
    conformal_factor,
    inverse_stereographic,
    stereographic_lift,
)
from nlpot.packing._model import Ball, Packing, read_packing, write_packing

__all__ = (
    "DEFAULT_FLOOR",
    "DEFAULT_TANGENCY_TOL",
    "LIFT_ERROR_CONSTANT",
    "Ball",
    "BlockingMetric",
    "BlockingRadii",
    "ContactGraph",
    "LiftedPacking",
    "Overlap",
    "Packing",
    "PackingReport",
    "PathProfile",
    "approach_paths",
    "blocking_metric",
    "blocking_radii",
    "conformal_factor",
    "contact_graph",
    "divergence_check",
    "inverse_stereographic",
    "lens_volume",
    "metric_lp_norm",
    "nearest_vertex",
    "packing_metric",
    "packing_metric_bound",
    "psi",
    "read_packing",
    "stereographic_lift",
    "verify_packing",
    "write_packing",
)
