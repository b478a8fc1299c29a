from nlpot.capmod._capacity import (
    CapacityCurve,
    Capacitor,
    capacitor,
    capacity_curve,
    p_capacity,
    tree_capacity,
)
from nlpot.capmod._cheeger import (
    MAX_EXACT_VERTICES,
    CheegerMeasurement,
    cheeger_constant_exact,
    cheeger_functional_check,
    edge_boundary_size,
    power_transform_samples,
)
from nlpot.capmod._modulus import (
    ModulusConfig,
    ModulusResult,
    NullTrend,
    PathFamily,
    connector_to_sphere,
    extremal_length,
    null_family_trend,
    p_modulus,
)
from nlpot.capmod._resolving import (
    BoundaryProxy,
    ResolvingResult,
    boundary_distance_function,
    resolving_check,
)
from nlpot.capmod._trend import (
    IndexEstimate,
    IndexRow,
    TrendThresholds,
    Verdict,
    classify_capacity_trend,
    classify_null_trend,
    classify_resolving_trend,
    decay_exponent,
    parabolic_index_estimate,
)

__all__ = (
    "BoundaryProxy",
    "CapacityCurve",
    "Capacitor",
    "CheegerMeasurement",
    "IndexEstimate",
    "IndexRow",
    "MAX_EXACT_VERTICES",
    "ModulusConfig",
    "ModulusResult",
    "NullTrend",
    "PathFamily",
    "ResolvingResult",
    "TrendThresholds",
    "Verdict",
    "boundary_distance_function",
    "capacitor",
    "capacity_curve",
    "cheeger_constant_exact",
    "cheeger_functional_check",
    "classify_capacity_trend",
    "classify_null_trend",
    "classify_resolving_trend",
    "connector_to_sphere",
    "decay_exponent",
    "edge_boundary_size",
    "extremal_length",
    "null_family_trend",
    "p_capacity",
    "p_modulus",
    "parabolic_index_estimate",
    "power_transform_samples",
    "resolving_check",
    "tree_capacity",
)
