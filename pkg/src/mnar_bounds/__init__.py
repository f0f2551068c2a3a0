"""Partial-identification and sensitivity bounds for causal contrasts when a
categorical confounder is missing not at random, independently of the outcome."""

from .bounds import PotentialOutcomeBounds, contrast_bounds, po_bounds, stratum_extremes
from .errors import (
    InfeasibleParams,
    InvalidProbability,
    InvariantViolation,
    MnarBoundsError,
    NotNormalized,
    ParseError,
    PositivityViolation,
    UndefinedContrast,
    ZeroConditioningEvent,
)
from .estimands import (
    ContrastKind,
    complete_case,
    contrast,
    fusion_estimate,
    multiple_imputation,
    true_potential,
)
from .example import example_model
from .probcore import (
    CausalModel,
    Interval,
    ObservedLaw,
    QueryKind,
    full_joint,
    observed_law,
    query,
    validate_law,
    validate_model,
)
from .sensitivity import (
    FeasibleRegion,
    SensitivityParams,
    analyst_params,
    feasible_region,
    sa_contrast_bounds,
    sa_po_bounds,
    sensitivity_grid,
    true_sensitivity_params,
)
from .simulation import Mechanism, SimConfig, classify, run_table1, run_table2, sample_model

__version__ = "0.1.0"
