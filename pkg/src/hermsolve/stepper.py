"""Time integration of the coefficient-space system.

Each step advances du/dt + A u + B(u) = f_hat by treating the linear operator
with the trapezoidal (Crank-Nicolson) rule and the quadratic convection term
with one forward-Euler evaluation at the old level:

    (I + dt/2 A(t+dt)) u1 = (I - dt/2 A(t)) u0 - dt B(u0)
                            + dt/2 (f_hat(t) + f_hat(t+dt)).

The operator and source are rebuilt at both time levels because the basis
parameters may move; coefficients are never re-projected between steps, since
the A1 block of the operator already accounts for the basis motion.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.linalg import solve_banded

from .assembly import assemble_system, nonlinear_rhs, source_coeffs
from .banded import BandedMatrix
from .basis import ParamSchedule
from .errors import DivergenceError, ParameterError, SolverError
from .quadrature import MAX_NODES, gauss_hermite, triple_product_tensor
from .spectral import ErrorReport, SpectralState, errors_against, project

__all__ = [
    "StepperConfig",
    "Workspace",
    "banded_solve",
    "step",
    "integrate",
]

DIVERGENCE_FACTOR = 1e12


@dataclass(frozen=True)
class StepperConfig:
    """Run parameters: step size, horizon, basis schedule, mode count.

    dt must divide t_final to rounding accuracy; the step count is
    round(t_final / dt).
    """

    dt: float
    t_final: float
    schedule: ParamSchedule
    n_modes: int

    def __post_init__(self) -> None:
        if not (self.dt > 0 and np.isfinite(self.dt)):
            raise ParameterError(f"dt must be positive and finite, got {self.dt}")
        if not (self.t_final >= 0 and np.isfinite(self.t_final)):
            raise ParameterError(
                f"t_final must be nonnegative and finite, got {self.t_final}"
            )
        if self.n_modes < 0:
            raise ParameterError(f"mode count must be >= 0, got {self.n_modes}")
        if self.t_final > 0:
            remainder = abs(self.t_final - self.steps * self.dt)
            if remainder > 1e-12 * self.t_final:
                raise ParameterError(
                    f"dt={self.dt} does not divide t_final={self.t_final}"
                )

    @property
    def steps(self) -> int:
        return int(round(self.t_final / self.dt))


class Workspace:
    """Per-run scratch shared across steps of one integration.

    Holds the quadrature rule used for projections and sources, the
    triple-product tensor when the convection term is active, a cached
    operator for schedules with frozen parameters, and the carry of the
    newer time level's operator and source from the previous step, so each
    step projects the source only once.
    """

    def __init__(self, n_modes, problem, schedule: ParamSchedule, rule=None):
        self.n_modes = n_modes
        self.problem = problem
        self.schedule = schedule
        self.rule = rule or gauss_hermite(min(2 * n_modes + 32, MAX_NODES))
        self.tensor = (
            triple_product_tensor(n_modes + 1) if problem.a1 != 0.0 else None
        )
        self._static = schedule.kind == "constant"
        self._static_operator: Optional[BandedMatrix] = None
        self._carry: Optional[tuple] = None

    def operator(self, params) -> BandedMatrix:
        if self._static:
            if self._static_operator is None:
                self._static_operator = assemble_system(
                    self.n_modes, params, self.problem.a2, self.problem.a3
                )
            return self._static_operator
        return assemble_system(
            self.n_modes, params, self.problem.a2, self.problem.a3
        )

    def level(self, t: float, params) -> tuple:
        """Operator and source coefficients at time t, reusing the carry."""
        if self._carry is not None and self._carry[0] == t:
            return self._carry[1], self._carry[2]
        operator = self.operator(params)
        if self.problem.f is None:
            source = np.zeros(self.n_modes + 1)
        else:
            source = source_coeffs(
                self.problem.f, t, self.n_modes, params, self.rule
            )
        return operator, source

    def store_carry(self, t: float, operator, source) -> None:
        self._carry = (t, operator, source)


def banded_solve(m: BandedMatrix, rhs: np.ndarray) -> np.ndarray:
    """Solve m x = rhs for a banded m with half-bandwidth <= 3.

    The solution is verified against the residual bound
    max|m x - rhs| <= 1e-12 max|rhs|; failure reports the system as
    numerically singular.
    """
    if m.k > 3:
        raise ParameterError(f"half-bandwidth {m.k} exceeds the supported 3")
    rhs = np.asarray(rhs, dtype=float)
    try:
        x = solve_banded((m.k, m.k), m.ab, rhs, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"banded solve failed: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise SolverError("banded solve produced non-finite values; matrix singular")
    residual = float(np.max(np.abs(m.matvec(x) - rhs)))
    if residual > 1e-12 * float(np.max(np.abs(rhs), initial=0.0)):
        raise SolverError(
            f"banded solve residual {residual:.3e} exceeds tolerance; "
            "matrix numerically singular"
        )
    return x


def step(
    state: SpectralState,
    dt: float,
    problem,
    schedule: ParamSchedule,
    workspace: Workspace,
) -> SpectralState:
    """Advance one step of length dt from the state's time."""
    if dt <= 0:
        raise ParameterError(f"dt must be positive, got {dt}")
    t_old = state.time
    t_new = t_old + dt
    params_new = schedule(t_new)

    op_old, src_old = workspace.level(t_old, state.params)
    op_new, src_new = workspace.level(t_new, params_new)

    rhs = op_old.scaled(-0.5 * dt).plus_identity().matvec(state.coeffs)
    rhs += 0.5 * dt * (src_old + src_new)
    if problem.a1 != 0.0:
        rhs -= dt * nonlinear_rhs(state, workspace.tensor, problem.a1)
    if not np.all(np.isfinite(rhs)):
        raise DivergenceError(
            "step right-hand side became non-finite", time=t_old
        )

    coeffs_new = banded_solve(op_new.scaled(0.5 * dt).plus_identity(), rhs)
    workspace.store_carry(t_new, op_new, src_new)
    return SpectralState(coeffs_new, t_new, params_new, state.n_modes)


def integrate(
    initial: Callable[[np.ndarray], np.ndarray],
    config: StepperConfig,
    problem,
    record_times: Optional[Sequence[float]] = None,
    workspace: Optional[Workspace] = None,
):
    """Project the initial data and advance to t_final.

    Returns the final state; with record_times, returns (state, reports)
    where reports hold the error metrics against the problem's reference
    solution at each requested time (which must be step multiples).
    Aborts with a divergence error if the coefficient norm exceeds
    1e12 times its initial value or stops being finite.
    """
    ws = workspace or Workspace(config.n_modes, problem, config.schedule)
    params0 = config.schedule(0.0)
    state = project(initial, config.n_modes, params0, ws.rule, t=0.0)

    record_map = {}
    reports: list[ErrorReport] = []
    if record_times is not None:
        if problem.exact is None:
            raise ParameterError(
                "recording errors requires a problem with a reference solution"
            )
        for rt in record_times:
            idx = int(round(rt / config.dt))
            if abs(rt - idx * config.dt) > 1e-9 * max(1.0, abs(rt)):
                raise ParameterError(
                    f"sample time {rt} is not a multiple of dt={config.dt}"
                )
            record_map[idx] = rt

    def record(idx: int) -> None:
        if idx in record_map:
            t = state.time
            reports.append(
                errors_against(state, lambda x: problem.exact(x, t), ws.rule)
            )

    record(0)
    norm0 = float(np.linalg.norm(state.coeffs))
    guard = DIVERGENCE_FACTOR * (norm0 if norm0 > 0 else 1.0)
    for i in range(1, config.steps + 1):
        try:
            state = step(state, config.dt, problem, config.schedule, ws)
        except DivergenceError as exc:
            raise DivergenceError(exc.args[0], step=i, time=exc.time) from None
        norm = float(np.linalg.norm(state.coeffs))
        if not np.isfinite(norm) or norm > guard:
            raise DivergenceError(
                f"coefficient norm {norm:.3e} exceeds {DIVERGENCE_FACTOR:.0e} "
                "times its initial value",
                step=i,
                time=state.time,
            )
        record(i)
    if record_times is None:
        return state
    return state, reports
