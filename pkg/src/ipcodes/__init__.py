"""Irregular product codes over finite fields: construction, systematic
encoding, distance bounds, density evolution and erasure-channel simulation."""

from .asymptotic import (DeTrajectory, DeVerdict, Profile, asymptotic_rate, de_check,
                         de_trajectory, design_alpha_from_beta, discretize, generalized_inverse)
from .distance import (DistanceProfile, achieve_distance, distance_bound, inner_max,
                       inner_via_maxflow, min_weight_oracle)
from .galois import Field
from .mds import ERASED, LinearCode, NestedRsFamily, make_family
from .product import (CodeSpec, IrregularProductCode, MarkSchedule, SpecError, build_code,
                      dimension, dimension_oracle, encode, extract_info, is_codeword,
                      mark_schedule)
from .simulate import (SimConfig, SimResult, asymptotic_validate, field_level_validate,
                       peel_decode, run_sweep)

__all__ = [
    "CodeSpec", "DeTrajectory", "DeVerdict", "DistanceProfile", "ERASED", "Field",
    "IrregularProductCode", "LinearCode", "MarkSchedule", "NestedRsFamily", "Profile",
    "SimConfig", "SimResult", "SpecError", "achieve_distance", "asymptotic_rate",
    "asymptotic_validate", "build_code", "de_check", "de_trajectory",
    "design_alpha_from_beta", "dimension", "dimension_oracle", "discretize",
    "distance_bound", "encode", "extract_info", "field_level_validate",
    "generalized_inverse", "inner_max", "inner_via_maxflow", "is_codeword",
    "make_family", "mark_schedule", "min_weight_oracle", "peel_decode", "run_sweep",
]

__version__ = "0.1.0"
