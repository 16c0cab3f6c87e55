"""Hermite-Galerkin spectral solver for convection-diffusion equations on the
real line, built on an orthonormal Hermite basis whose scaling and centering
may move in time.

Submodules: basis (basis functions and parameter schedules), quadrature
(Gauss-Hermite rules and the triple-product tensor), spectral (projection,
synthesis, norms, error metrics), assembly (coefficient-space operators),
stepper (time integration), problems (benchmark presets), cli (experiment
runner).  The two `integrate` operations live on their modules:
quadrature.integrate for line integrals, stepper.integrate for time stepping.
"""
from .banded import BandedMatrix
from .basis import (
    BasisParams,
    ParamSchedule,
    d,
    dt_coupling,
    dx_operator,
    eigenvalue,
    eval_ghf_all,
    eval_ghf_dx_all,
)
from .errors import (
    CapabilityError,
    DivergenceError,
    HermsolveError,
    InputError,
    IntegrationError,
    ParameterError,
    SolverError,
)
from .quadrature import (
    QuadratureRule,
    TripleProductTensor,
    gauss_hermite,
    integrate_factored,
    triple_product_tensor,
)
from .spectral import (
    ErrorReport,
    SpectralState,
    errors_against,
    project,
    sobolev_norm,
    synthesize,
)
from .assembly import (
    assemble_a1,
    assemble_a3,
    assemble_a4,
    assemble_system,
    nonlinear_rhs,
    nonlinear_rhs_nodal,
    source_coeffs,
)
from .stepper import StepperConfig, Workspace, banded_solve, step
from .cli import (
    ConvergenceTable,
    ExperimentConfig,
    TableRow,
    convergence_order,
    emit_table,
    parse_schedule,
    parse_table,
    run_experiment,
)
from .problems import (
    DEFAULT_SCHEDULES,
    PRESETS,
    ProblemSpec,
    burgers_problem,
    heat_problem,
    kdvb_problem,
)

__version__ = "0.1.0"

__all__ = [
    "BandedMatrix",
    "BasisParams",
    "ParamSchedule",
    "d",
    "dt_coupling",
    "dx_operator",
    "eigenvalue",
    "eval_ghf_all",
    "eval_ghf_dx_all",
    "HermsolveError",
    "ParameterError",
    "InputError",
    "CapabilityError",
    "IntegrationError",
    "SolverError",
    "DivergenceError",
    "QuadratureRule",
    "TripleProductTensor",
    "gauss_hermite",
    "integrate_factored",
    "triple_product_tensor",
    "SpectralState",
    "ErrorReport",
    "project",
    "synthesize",
    "sobolev_norm",
    "errors_against",
    "assemble_a1",
    "assemble_a3",
    "assemble_a4",
    "assemble_system",
    "nonlinear_rhs",
    "nonlinear_rhs_nodal",
    "source_coeffs",
    "StepperConfig",
    "Workspace",
    "banded_solve",
    "step",
    "ProblemSpec",
    "heat_problem",
    "burgers_problem",
    "kdvb_problem",
    "PRESETS",
    "DEFAULT_SCHEDULES",
    "ExperimentConfig",
    "TableRow",
    "ConvergenceTable",
    "parse_schedule",
    "run_experiment",
    "convergence_order",
    "emit_table",
    "parse_table",
    "__version__",
]
