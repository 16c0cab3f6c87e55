"""Hermite functions with a time-dependent scaling and translating factor.

The working basis is the orthonormal family

    H_n(x) = (alpha / (2^n n! sqrt(pi)))^(1/2) h_n(alpha (x - beta))
             * exp(-alpha^2 (x - beta)^2 / 2),

where h_n is the physicists' Hermite polynomial, alpha > 0 sets the
resolution length 1/alpha, and beta recenters the family.  Both factors may
depend on time; their rates alpha_dot and beta_dot enter the coefficient
dynamics through the banded drift operator built by `dt_coupling`.

Values are produced by the normalized three-term recurrence

    H_{n+1} = [alpha (x - beta) H_n - d(n) H_{n-1}] / d(n+1),
    d(n) = sqrt(n / 2),

seeded with H_0 = (alpha/sqrt(pi))^(1/2) exp(-alpha^2 (x - beta)^2 / 2).  The
Gaussian is folded into the seed, so no intermediate ever forms 2^n n! or a
bare polynomial value; the computation stays in range for every n and x that
double precision can represent.  Once the seed underflows to zero (roughly
|alpha (x - beta)| > 38.6) every output is exactly zero, which is below
double-precision resolution of the true values anyway.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .banded import BandedMatrix
from .errors import InputError, ParameterError

__all__ = [
    "BasisParams",
    "ParamSchedule",
    "d",
    "eigenvalue",
    "eval_ghf_all",
    "eval_ghf_dx_all",
    "dx_operator",
    "dt_coupling",
]


def d(n):
    """Recurrence weight d(n) = sqrt(n/2); d(0) = 0.  Accepts arrays."""
    return np.sqrt(np.maximum(np.asarray(n, dtype=float), 0.0) / 2.0)


def eigenvalue(n, alpha):
    """Eigenvalue scale lambda_n = 2 alpha^2 n of the n-th basis function."""
    return 2.0 * alpha**2 * np.asarray(n, dtype=float)


@dataclass(frozen=True)
class BasisParams:
    """Scaling/translating factors and their time derivatives at one instant.

    Attributes
    ----------
    alpha : float
        Scaling factor, > 0 (units 1/length).
    beta : float
        Translating factor (units length).
    alpha_dot, beta_dot : float
        Time derivatives d(alpha)/dt and d(beta)/dt.
    """

    alpha: float
    beta: float = 0.0
    alpha_dot: float = 0.0
    beta_dot: float = 0.0

    def __post_init__(self):
        if not (np.isfinite(self.alpha) and self.alpha > 0.0):
            raise ParameterError(f"scaling factor must be positive, got {self.alpha}")
        for name in ("beta", "alpha_dot", "beta_dot"):
            if not np.isfinite(getattr(self, name)):
                raise ParameterError(f"{name} must be finite")


@dataclass(frozen=True)
class ParamSchedule:
    """Closed-form time evolution of the basis parameters.

    kind is one of "constant", "inverse-sqrt-shift", "linear-drift",
    "custom".  Calling the schedule at a time t returns BasisParams with the
    derivatives evaluated analytically, never by differencing.
    """

    kind: str
    _evaluate: Callable[[float], BasisParams] = field(repr=False)

    def __call__(self, t: float) -> BasisParams:
        return self._evaluate(float(t))

    @classmethod
    def constant(cls, alpha: float, beta: float = 0.0) -> "ParamSchedule":
        """Static basis: alpha_dot = beta_dot = 0 exactly."""
        params = BasisParams(alpha=alpha, beta=beta)
        return cls("constant", lambda t: params)

    @classmethod
    def inverse_sqrt_shift(cls) -> "ParamSchedule":
        """alpha(t) = 1/sqrt(2(t+1)), beta = 0.

        The exact derivative is alpha'(t) = -(2(t+1))^(-3/2).  This schedule
        tracks a Gaussian envelope exp(-x^2 / (4(t+1))) spreading under unit
        diffusion.
        """

        def evaluate(t: float) -> BasisParams:
            s = 2.0 * (t + 1.0)
            return BasisParams(alpha=s**-0.5, beta=0.0, alpha_dot=-(s**-1.5))

        return cls("inverse-sqrt-shift", evaluate)

    @classmethod
    def linear_drift(cls, alpha: float, slope: float) -> "ParamSchedule":
        """Constant alpha with beta(t) = slope * t."""

        def evaluate(t: float) -> BasisParams:
            return BasisParams(alpha=alpha, beta=slope * t, beta_dot=slope)

        return cls("linear-drift", evaluate)

    @classmethod
    def custom(cls, fn: Callable[[float], BasisParams]) -> "ParamSchedule":
        return cls("custom", fn)


def _as_points(x):
    xs = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(xs)):
        raise InputError("evaluation points must be finite")
    return xs


def eval_ghf_all(N: int, x, params: BasisParams):
    """Evaluate H_0 .. H_N at x.

    Parameters
    ----------
    N : int
        Highest mode index, >= 0.
    x : float or array
        Evaluation point(s).
    params : BasisParams

    Returns
    -------
    ndarray of shape (N+1,) for scalar x, (N+1, len(x)) for array x.
    """
    if N < 0:
        raise ParameterError(f"mode count must be >= 0, got {N}")
    xs = _as_points(x)
    scalar = xs.ndim == 0
    z = params.alpha * (np.atleast_1d(xs) - params.beta)
    out = np.zeros((N + 1, z.size))
    out[0] = np.sqrt(params.alpha / np.sqrt(np.pi)) * np.exp(-0.5 * z * z)
    if N >= 1:
        out[1] = z * out[0] / d(1)
    for n in range(1, N):
        out[n + 1] = (z * out[n] - d(n) * out[n - 1]) / d(n + 1)
    return out[:, 0] if scalar else out


def eval_ghf_dx_all(N: int, x, params: BasisParams):
    """Pointwise x-derivatives of H_0 .. H_N at x.

    Uses d_x H_n = alpha [-d(n+1) H_{n+1} + d(n) H_{n-1}], which needs values
    up to mode N+1.
    """
    if N < 0:
        raise ParameterError(f"mode count must be >= 0, got {N}")
    xs = _as_points(x)
    scalar = xs.ndim == 0
    H = eval_ghf_all(N + 1, np.atleast_1d(xs), params)
    ns = np.arange(N + 1)
    out = -d(ns + 1)[:, None] * H[1:]
    out[1:] += d(ns[1:])[:, None] * H[:N]
    out *= params.alpha
    return out[:, 0] if scalar else out


def dx_operator(N: int, alpha: float) -> BandedMatrix:
    """Coefficient-space image of d_x on the span of H_0 .. H_N.

    For u = sum u_n H_n the truncated derivative has coefficients
    (D u)_m = alpha [-d(m) u_{m-1} + d(m+1) u_{m+1}].  D is skew-symmetric
    except for the dropped coupling of mode N to mode N+1.
    """
    if N < 0:
        raise ParameterError(f"mode count must be >= 0, got {N}")
    if not (np.isfinite(alpha) and alpha > 0.0):
        raise ParameterError(f"scaling factor must be positive, got {alpha}")
    mat = BandedMatrix.zeros(N + 1, 1)
    j = np.arange(N + 1)
    # offset -1 (superdiagonal): A[j-1, j] = alpha d(j)
    mat.ab[0, 1:] = alpha * d(j[1:])
    # offset +1 (subdiagonal): A[j+1, j] = -alpha d(j+1)
    mat.ab[2, :N] = -alpha * d(j[:N] + 1)
    return mat


def dt_coupling(N: int, params: BasisParams) -> BandedMatrix:
    """Inner products <d_t H_n, H_m> as a half-bandwidth-2 matrix.

    Row m, column n convention.  The time derivative of a basis function is

        d_t H_n = -(alpha'/alpha) d(n+1) d(n+2) H_{n+2}
                  + alpha beta' d(n+1) H_{n+1}
                  - alpha beta' d(n) H_{n-1}
                  + (alpha'/alpha) d(n) d(n-1) H_{n-2},

    so the matrix has entries (with i = row, j = column):
    i = j+2 -> -(alpha'/alpha) d(i) d(i-1);  i = j+1 -> alpha beta' d(i);
    i = j-1 -> -alpha beta' d(j);            i = j-2 -> (alpha'/alpha) d(j) d(j-1).
    It is skew-symmetric, reflecting that the basis stays orthonormal as it
    moves.
    """
    if N < 0:
        raise ParameterError(f"mode count must be >= 0, got {N}")
    alpha, ratio = params.alpha, params.alpha_dot / params.alpha
    ab_dot = alpha * params.beta_dot
    mat = BandedMatrix.zeros(N + 1, 2)
    j = np.arange(N + 1)
    if N >= 2:
        # offset +2: A[j+2, j] = -(alpha'/alpha) d(j+2) d(j+1)
        mat.ab[4, : N - 1] = -ratio * d(j[: N - 1] + 2) * d(j[: N - 1] + 1)
        # offset -2: A[j-2, j] = (alpha'/alpha) d(j) d(j-1)
        mat.ab[0, 2:] = ratio * d(j[2:]) * d(j[2:] - 1)
    if N >= 1:
        # offset +1: A[j+1, j] = alpha beta' d(j+1)
        mat.ab[3, :N] = ab_dot * d(j[:N] + 1)
        # offset -1: A[j-1, j] = -alpha beta' d(j)
        mat.ab[1, 1:] = -ab_dot * d(j[1:])
    return mat
