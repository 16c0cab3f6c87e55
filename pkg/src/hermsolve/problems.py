"""Benchmark problems with manufactured sources and closed-form references.

Each problem fixes the coefficients of

    u_t + a1 g(u) u_x - a2 u_xx + a3 u_xxx = f(x, t)

together with initial data, a source, and the reference solution the source
was manufactured from.  All three references decay at least like a Gaussian,
so they live in the natural approximation space of the Hermite basis.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import ParameterError

__all__ = [
    "ProblemSpec",
    "heat_problem",
    "burgers_problem",
    "kdvb_problem",
    "PRESETS",
    "DEFAULT_SCHEDULES",
]


def _sech(z: np.ndarray) -> np.ndarray:
    # cosh overflows harmlessly far in the tails; 1/inf -> 0 is the true limit
    with np.errstate(over="ignore"):
        return 1.0 / np.cosh(z)


@dataclass(frozen=True)
class ProblemSpec:
    """Coefficients and data of one convection-diffusion-dispersion problem.

    g is the convection nonlinearity and g_primitive its antiderivative
    (used by the quadrature cross-check of the convection term); the fast
    convection path assumes g(u) = u.  growth_exponent documents the
    polynomial growth degree of g; no code path branches on it.
    """

    name: str
    a1: float
    a2: float
    a3: float
    g: Callable[[np.ndarray], np.ndarray]
    g_primitive: Callable[[np.ndarray], np.ndarray]
    f: Optional[Callable[[np.ndarray, float], np.ndarray]]
    u0: Callable[[np.ndarray], np.ndarray]
    exact: Optional[Callable[[np.ndarray, float], np.ndarray]] = None
    growth_exponent: float = 1.0

    def __post_init__(self) -> None:
        if not (self.a2 >= 0 and np.isfinite(self.a2)):
            raise ParameterError(
                f"diffusion coefficient must be >= 0, got {self.a2}"
            )
        xs = np.linspace(-10.0, 10.0, 100)
        if self.exact is not None:
            gap = np.max(np.abs(np.asarray(self.exact(xs, 0.0)) - self.u0(xs)))
            if gap > 1e-13:
                raise ParameterError(
                    f"reference at t=0 differs from initial data by {gap:.3e}"
                )
        us = np.random.default_rng(0).uniform(-3.0, 3.0, 32)
        h = 1e-3
        fd = (
            -self.g_primitive(us + 2 * h)
            + 8 * self.g_primitive(us + h)
            - 8 * self.g_primitive(us - h)
            + self.g_primitive(us - 2 * h)
        ) / (12 * h)
        if np.max(np.abs(fd - self.g(us))) > 1e-8:
            raise ParameterError(
                "g_primitive is not an antiderivative of g"
            )


def _identity(u: np.ndarray) -> np.ndarray:
    return u


def _half_square(u: np.ndarray) -> np.ndarray:
    return 0.5 * u * u


def heat_problem() -> ProblemSpec:
    """Pure diffusion with a spreading odd profile sin(x) e^(-x^2/(4(t+1)))/sqrt(t+1)."""

    def exact(x, t):
        return np.sin(x) / np.sqrt(t + 1.0) * np.exp(-(x * x) / (4.0 * (t + 1.0)))

    def source(x, t):
        s = t + 1.0
        return (x * np.cos(x) + s * np.sin(x)) * s**-1.5 * np.exp(-(x * x) / (4.0 * s))

    return ProblemSpec(
        name="heat",
        a1=0.0,
        a2=1.0,
        a3=0.0,
        g=_identity,
        g_primitive=_half_square,
        f=source,
        u0=lambda x: exact(x, 0.0),
        exact=exact,
    )


_BURGERS_A = 0.3
_BURGERS_B = 0.5
_BURGERS_C = -3.0


def burgers_problem() -> ProblemSpec:
    """Viscous Burgers with a soliton-like profile drifting through a spreading Gaussian."""

    def phase(x, t):
        s = 1.0 + t
        return _BURGERS_A * x / (2.0 * s) - _BURGERS_B * np.log(s) - _BURGERS_C

    def exact(x, t):
        return np.exp(-(x * x) / (4.0 * (1.0 + t))) * _sech(phase(x, t)) ** 2

    def source(x, t):
        s = 1.0 + t
        xi = phase(x, t)
        th = np.tanh(xi)
        sech2 = _sech(xi) ** 2
        a = _BURGERS_A
        term1 = (
            -np.exp(-(x * x) / (2.0 * s))
            * sech2**2
            / s
            * (0.5 * x + a * th)
        )
        term2 = (
            np.exp(-(x * x) / (4.0 * s))
            * sech2
            / s
            * ((s + a * a) / (2.0 * s) + 2.0 * _BURGERS_B * th
               - th * th * 3.0 * a * a / (2.0 * s))
        )
        return term1 + term2

    return ProblemSpec(
        name="burgers",
        a1=1.0,
        a2=1.0,
        a3=0.0,
        g=_identity,
        g_primitive=_half_square,
        f=source,
        u0=lambda x: exact(x, 0.0),
        exact=exact,
    )


def kdvb_problem() -> ProblemSpec:
    """Convection-diffusion-dispersion with a left-translating soliton sech^2(2(x+t))."""

    def exact(x, t):
        return _sech(2.0 * (x + t)) ** 2

    def source(x, t):
        xi = 2.0 * (x + t)
        sech2 = _sech(xi) ** 2
        return -8.0 * sech2 * (2.0 - 3.0 * sech2 + 2.0 * np.tanh(xi) * sech2)

    return ProblemSpec(
        name="kdvb",
        a1=1.0,
        a2=1.0,
        a3=-1.0 / 16.0,
        g=_identity,
        g_primitive=_half_square,
        f=source,
        u0=lambda x: exact(x, 0.0),
        exact=exact,
    )


PRESETS = {
    "heat": heat_problem,
    "burgers": burgers_problem,
    "kdvb": kdvb_problem,
}

# Schedule spec strings applied when the caller does not choose basis
# parameters: the spreading problems track their reference width
# 1/sqrt(2(t+1)); the soliton keeps a fixed width and stays centered unless
# the caller opts into the drift-tracking shift.
DEFAULT_SCHEDULES = {
    "heat": ("inv-sqrt-shift", "const:0"),
    "burgers": ("inv-sqrt-shift", "const:0"),
    "kdvb": ("const:2.8284271247461903", "const:0"),
}
