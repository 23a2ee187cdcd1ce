"""Interpolation sequences for entire functions of exponential type bounded on
the real line: condition checkers, explicit constructions and numerical
verification."""

from .conditions import (
    ConditionReport,
    analyze,
    balance_integral,
    carleson_pairwise,
    local_counting_check,
    poisson_balayage,
    poisson_kernel,
    zero_set_report,
)
from .constructions import (
    ConstructionError,
    GeneratingFunction,
    GeneratorError,
    Interpolant,
    WeightParameters,
    assemble_vanishing_function,
    blaschke_eval,
    build_perturbed_sine,
    generating_derivative_at_zero,
    generating_eval,
    generating_log_abs,
    interpolant_eval,
    peak_function_eval,
    weight_eval,
)
from .sequences import (
    DiscreteSequence,
    SequenceError,
    TruncationError,
    check_weak_separation,
    counting_function,
    integrated_counting,
    lattice,
    nearest_distance,
)
from .verification import (
    estimate_exponential_type,
    interpolation_report,
    jensen_check,
    union_interpolation_check,
)

__version__ = "0.1.0"
