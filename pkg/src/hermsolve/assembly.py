"""Coefficient-space operators of the semi-discrete system.

For a state with coefficients u and basis parameters (alpha, beta) evolving
under a convection-diffusion-dispersion equation, the system reads

    du/dt + A u + B(u) = f_hat,      A = A1 + a2 A3 - a3 A4,

where A1 couples modes through the basis parameter motion, A3 is the Gram
matrix of first derivatives (diffusion), A4 pairs second against first
derivatives (dispersion), B is the quadratic convection term, and f_hat holds
source coefficients in the basis at the current time.
"""
from __future__ import annotations

from typing import Callable

import numpy as np

from .banded import BandedMatrix
from .basis import BasisParams, d, dt_coupling, eval_ghf_all, eval_ghf_dx_all
from .errors import CapabilityError, IntegrationError, ParameterError
from .quadrature import QuadratureRule, TripleProductTensor
from .spectral import SpectralState

__all__ = [
    "BandedMatrix",
    "assemble_a1",
    "assemble_a3",
    "assemble_a4",
    "assemble_system",
    "nonlinear_rhs",
    "nonlinear_rhs_nodal",
    "source_coeffs",
]


def assemble_a1(N: int, params: BasisParams) -> BandedMatrix:
    """Basis-motion coupling matrix; skew-symmetric, half-bandwidth 2."""
    return dt_coupling(N, params)


def _check_alpha(alpha: float) -> None:
    if not (alpha > 0 and np.isfinite(alpha)):
        raise ParameterError(f"alpha must be positive and finite, got {alpha}")


def assemble_a3(N: int, alpha: float) -> BandedMatrix:
    """Gram matrix of first derivatives; symmetric positive semi-definite.

    Diagonal alpha^2 (i + 1/2); offsets +-2 carry -alpha^2 d(l+1) d(l+2)
    with l = min(i, j).
    """
    _check_alpha(alpha)
    mat = BandedMatrix.zeros(N + 1, 2)
    j = np.arange(N + 1)
    a2 = alpha * alpha
    mat.ab[2, :] = a2 * (j + 0.5)
    if N >= 2:
        mat.ab[0, 2:] = -a2 * d(j[2:] - 1) * d(j[2:])
        mat.ab[4, : N - 1] = -a2 * d(j[: N - 1] + 1) * d(j[: N - 1] + 2)
    return mat


def assemble_a4(N: int, alpha: float) -> BandedMatrix:
    """Second-against-first derivative pairing; skew-symmetric, offsets +-1, +-3.

    All entries scale with alpha^3: one alpha from each derivative and one
    from the inner product of the doubly-raised modes.
    """
    _check_alpha(alpha)
    mat = BandedMatrix.zeros(N + 1, 3)
    a3 = alpha**3
    j = np.arange(N + 1)
    upper1 = a3 * (d(j) ** 3 + d(j - 1) ** 2 * d(j) + d(j) * d(j + 1) ** 2)
    mat.ab[2, 1:] = upper1[1:]
    lower1 = a3 * (
        d(j + 1) ** 3 + d(j) ** 2 * d(j + 1) + d(j + 1) * d(j + 2) ** 2
    )
    mat.ab[4, :N] = -lower1[:N]
    if N >= 3:
        mat.ab[0, 3:] = -a3 * d(j[3:] - 2) * d(j[3:] - 1) * d(j[3:])
        mat.ab[6, : N - 2] = a3 * d(j[: N - 2] + 1) * d(j[: N - 2] + 2) * d(
            j[: N - 2] + 3
        )
    return mat


def assemble_system(N: int, params: BasisParams, a2: float, a3: float) -> BandedMatrix:
    """Full linear operator A = A1 + a2 A3 - a3 A4.

    Half-bandwidth 2 when a3 = 0, else 3.
    """
    system = assemble_a1(N, params)
    if a2 != 0.0:
        system = system + assemble_a3(N, params.alpha).scaled(a2)
    if a3 != 0.0:
        system = system + assemble_a4(N, params.alpha).scaled(-a3)
    return system


def nonlinear_rhs(
    state: SpectralState, tensor: TripleProductTensor, a1: float
) -> np.ndarray:
    """Convection term B(u) so the system reads du/dt + A u + B(u) = f_hat.

    B_m = (a1/2) alpha [d(m+1) S_{m+1} - d(m) S_{m-1}] with
    S_k = sqrt(alpha) sum_{l,n} u_l u_n T[l][n][k]: the inner product of the
    squared solution with basis function k, assembled from the cached
    reference tensor by the sqrt(alpha) scaling law.
    """
    N = state.n_modes
    if tensor.order < N + 1:
        raise CapabilityError(
            f"tensor order {tensor.order} too small; need >= {N + 1}"
        )
    alpha = state.params.alpha
    u = state.coeffs
    t_block = tensor.entries[: N + 1, : N + 1, : N + 2]
    s = np.sqrt(alpha) * (u @ np.tensordot(u, t_block, axes=(0, 0)))
    m = np.arange(N + 1)
    s_prev = np.concatenate(([0.0], s[:N]))
    return 0.5 * a1 * alpha * (d(m + 1) * s[1:] - d(m) * s_prev)


def nonlinear_rhs_nodal(
    state: SpectralState,
    g_primitive: Callable[[np.ndarray], np.ndarray],
    a1: float,
    rule: QuadratureRule,
) -> np.ndarray:
    """Convection term by direct quadrature: B_m = -a1 <G(u_N), dH_m/dx>.

    Independent cross-check for nonlinear_rhs: evaluates the synthesized
    solution at the mapped nodes, applies the convection primitive G, and
    integrates against the basis derivatives.  Slower; not used in stepping.
    """
    params = state.params
    xs = rule.nodes / params.alpha + params.beta
    basis_at_xs = eval_ghf_all(state.n_modes, xs, params)
    u_vals = state.coeffs @ basis_at_xs
    g_vals = np.asarray(g_primitive(u_vals), dtype=float)
    if not np.all(np.isfinite(g_vals)):
        raise IntegrationError("convection primitive non-finite at a node")
    dbasis = eval_ghf_dx_all(state.n_modes, xs, params)
    return -a1 * (dbasis @ (rule.modified_weights * g_vals)) / params.alpha


def source_coeffs(
    f: Callable[[np.ndarray, float], np.ndarray],
    t: float,
    N: int,
    params: BasisParams,
    rule: QuadratureRule,
) -> np.ndarray:
    """Coefficients of the source at time t in the basis at params."""
    xs = rule.nodes / params.alpha + params.beta
    vals = np.asarray(f(xs, t), dtype=float)
    if vals.shape != xs.shape:
        raise IntegrationError(
            f"source returned shape {vals.shape} for {xs.shape} nodes"
        )
    if not np.all(np.isfinite(vals)):
        bad = xs[~np.isfinite(vals)][0]
        raise IntegrationError(f"source non-finite at x = {bad}", node=bad)
    basis_at_xs = eval_ghf_all(N, xs, params)
    return basis_at_xs @ (rule.modified_weights * vals) / params.alpha
