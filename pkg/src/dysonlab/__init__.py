"""Numerical laboratory for the one-dimensional long-range Ising chain.

Couplings decay as distance^(-alpha) for alpha in (1, 2], with an optional
nearest-neighbour boost.  The package provides exact finite-volume
enumeration, a Metropolis sampler, triangle/interface geometry, closed-form
bound checks, and packaged experiments, all behind a deterministic CLI.
"""

from .errors import CapExceededError, DysonError, PreconditionError
from .lattice import (
    BcKind,
    BoundaryCondition,
    CouplingModel,
    SpinConfig,
    Volume,
    alternating_config,
    boundary_field,
    dobrushin_bc,
    energy,
    free_bc,
    frozen_bc,
    minus_bc,
    plus_bc,
)
from .exact import Constraint, ExactResult, exact_gibbs, exact_state_distribution
from .mc import Estimate, McParams, mc_magnetization, mc_sample_stream
from .contours import (
    InterfaceHistogram,
    ThetaGrid,
    TriangleDiagram,
    build_triangles,
    interface_histogram,
    interface_point,
)
from .analytics import (
    BoundReport,
    FieldProfileSpec,
    alternating_remainder,
    b_max,
    b_observable,
    boundary_tail_bound,
    boundary_tail_double_sum,
    f_alpha,
    f_alpha_prime,
    f_alpha_second,
    field_profile,
    field_profile_curve,
    g_coefficient,
    tail_power_sum,
    zeta_alpha,
)
from .experiments import (
    ExperimentReport,
    Table,
    Verdict,
    interaction_surgery_shift,
    past_pattern,
    run_discontinuity,
    run_localization,
    run_wetting,
)

__version__ = "1.0.0"

__all__ = [
    "BcKind", "BoundReport", "BoundaryCondition", "CapExceededError",
    "Constraint", "CouplingModel", "DysonError", "Estimate", "ExactResult",
    "ExperimentReport", "FieldProfileSpec", "InterfaceHistogram", "McParams",
    "PreconditionError", "SpinConfig", "Table", "ThetaGrid",
    "TriangleDiagram", "Verdict", "Volume",
    "alternating_config", "alternating_remainder", "b_max", "b_observable",
    "boundary_field", "boundary_tail_bound", "boundary_tail_double_sum",
    "build_triangles", "dobrushin_bc", "energy", "exact_gibbs",
    "exact_state_distribution", "f_alpha", "f_alpha_prime", "f_alpha_second",
    "field_profile", "field_profile_curve", "free_bc", "frozen_bc",
    "g_coefficient", "interaction_surgery_shift", "interface_histogram",
    "interface_point", "mc_magnetization", "mc_sample_stream", "minus_bc",
    "past_pattern", "plus_bc", "run_discontinuity", "run_localization",
    "run_wetting", "tail_power_sum", "zeta_alpha",
]
