"""Coefficient-space representation of functions on the real line.

A function is represented by its inner products with the orthonormal Hermite
basis at given (alpha, beta).  Projection and synthesis convert between the
function and coefficient views; the weighted norm and the two error metrics
operate on the coefficient view.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .basis import BasisParams, eval_ghf_all
from .errors import InputError, ParameterError
from .quadrature import QuadratureRule, gauss_hermite

__all__ = [
    "SpectralState",
    "ErrorReport",
    "project",
    "synthesize",
    "sobolev_norm",
    "errors_against",
]


@dataclass(frozen=True)
class SpectralState:
    """Truncated expansion: coeffs[n] multiplies basis function n.

    coeffs has length n_modes + 1.  params are the basis parameters the
    coefficients are expressed in; time is the solution time they belong to.
    """

    coeffs: np.ndarray
    time: float
    params: BasisParams
    n_modes: int

    def __post_init__(self) -> None:
        coeffs = np.asarray(self.coeffs, dtype=float)
        if coeffs.shape != (self.n_modes + 1,):
            raise InputError(
                f"expected {self.n_modes + 1} coefficients, got shape {coeffs.shape}"
            )
        if not np.all(np.isfinite(coeffs)):
            raise InputError("coefficients must be finite")
        object.__setattr__(self, "coeffs", coeffs)


@dataclass(frozen=True)
class ErrorReport:
    """Error metrics of a state against a reference solution.

    l2_error is the L2 norm of the difference over the line; rel_linf_error
    is the max pointwise difference over the mapped Hermite-Gauss points
    divided by the max reference magnitude there (scale-invariant).
    """

    l2_error: float
    rel_linf_error: float
    at_time: float
    n_modes: int
    dt: Optional[float] = None


def project(
    u: Callable[[np.ndarray], np.ndarray],
    N: int,
    params: BasisParams,
    rule: QuadratureRule,
    t: float = 0.0,
) -> SpectralState:
    """Expand u in the basis at params: coeffs[n] = integral of u * H_n."""
    if N < 0:
        raise ParameterError(f"mode count must be >= 0, got {N}")
    xs = rule.nodes / params.alpha + params.beta
    vals = np.asarray(u(xs), dtype=float)
    if vals.shape != xs.shape:
        raise InputError(
            f"function returned shape {vals.shape} for {xs.shape} nodes"
        )
    if not np.all(np.isfinite(vals)):
        raise InputError("function non-finite at a quadrature node")
    basis_at_nodes = eval_ghf_all(N, xs, params)
    coeffs = basis_at_nodes @ (rule.modified_weights * vals) / params.alpha
    return SpectralState(coeffs, t, params, N)


def synthesize(state: SpectralState, xs) -> np.ndarray:
    """Evaluate the expansion pointwise: sum_n coeffs[n] H_n(x)."""
    basis_at_xs = eval_ghf_all(state.n_modes, xs, state.params)
    return state.coeffs @ basis_at_xs


def sobolev_norm(state: SpectralState, r: int) -> float:
    """Weighted coefficient norm: (sum_k (2 alpha^2 (k+1))^r coeffs[k]^2)^(1/2).

    r = 0 reduces to the Euclidean norm of the coefficients, which equals the
    L2 norm of the synthesized function by orthonormality.
    """
    if r < 0:
        raise ParameterError(f"norm index must be >= 0, got {r}")
    k = np.arange(state.n_modes + 1)
    lam = 2.0 * state.params.alpha**2 * (k + 1)
    return float(np.sqrt(np.sum(lam**r * state.coeffs**2)))


def errors_against(
    state: SpectralState,
    exact: Callable[[np.ndarray], np.ndarray],
    rule: QuadratureRule,
) -> ErrorReport:
    """Measure L2 and relative max-norm errors of a state against exact.

    The L2 error integrates (u_N - exact)^2 with the given rule under the
    state's basis map.  The relative max-norm error samples the mapped nodes
    of the (n_modes + 1)-point rule at the state's current parameters.
    """
    params = state.params
    xs = rule.nodes / params.alpha + params.beta
    diff = synthesize(state, xs) - np.asarray(exact(xs), dtype=float)
    if not np.all(np.isfinite(diff)):
        raise InputError("reference non-finite at a quadrature node")
    l2_sq = rule.modified_weights @ diff**2 / params.alpha
    l2 = float(np.sqrt(max(l2_sq, 0.0)))

    nodes_rule = gauss_hermite(state.n_modes + 1)
    ys = nodes_rule.nodes / params.alpha + params.beta
    ref = np.asarray(exact(ys), dtype=float)
    denom = float(np.max(np.abs(ref)))
    if denom == 0.0:
        raise ZeroDivisionError(
            "reference vanishes at every sample point; relative error undefined"
        )
    rel_linf = float(np.max(np.abs(synthesize(state, ys) - ref)) / denom)
    return ErrorReport(l2, rel_linf, state.time, state.n_modes)
