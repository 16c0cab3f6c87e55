"""Gauss-Hermite quadrature and the triple-product tensor.

Rules are built for the weight exp(-z^2) by the Golub-Welsch procedure: the
nodes are the eigenvalues of the symmetric Jacobi matrix with zero diagonal
and off-diagonals sqrt(k/2), and the weights are sqrt(pi) times the squared
first eigenvector components.  The eigenvector form is evaluated through the
Christoffel identity sqrt(pi) v0_j^2 = 1 / sum_n p_n(z_j)^2 over the
orthonormal Hermite polynomials p_n, n < q, because LAPACK eigenvectors lose
all relative accuracy in their exponentially small tail components; folding
exp(-z^2) into the sum turns p_n into the Hermite functions of the basis
recurrence and gives the modified weight

    w_j exp(z_j^2) = 1 / sum_{n<q} psi_n(z_j)^2

with no exponentials anywhere, accurate to machine precision at every node.

Integrals over the real line use the affine map z = alpha (x - beta):

    int f dx  ~=  sum_j w_j exp(z_j^2) f(z_j / alpha + beta) / alpha,

valid for integrands decaying like the squared basis Gaussian.  The modified
weights are O(1) uniformly in j (the rule acts like a trapezoid rule with
spacing ~ pi / sqrt(2 q) over the node span).  The raw weights themselves
underflow to zero once |z| grows past about 26 (q around 350); rules larger
than q = 500 are refused before the recurrence seed exp(-z^2/2) itself can
underflow at the outermost nodes.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .basis import BasisParams, eval_ghf_all
from .errors import CapabilityError, IntegrationError, ParameterError

__all__ = [
    "QuadratureRule",
    "TripleProductTensor",
    "gauss_hermite",
    "integrate",
    "integrate_factored",
    "triple_product_tensor",
]

MAX_NODES = 500


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Hermite rule for the weight exp(-z^2).

    Attributes
    ----------
    nodes : ndarray
        Abscissae z_j, symmetric about 0, ascending.
    weights : ndarray
        Weights w_j; sum to sqrt(pi).
    modified_weights : ndarray
        w_j exp(z_j^2), the O(1) factors used for integrals of
        Gaussian-decaying functions.
    count : int
        Node count q.
    """

    nodes: np.ndarray
    weights: np.ndarray
    modified_weights: np.ndarray
    count: int


@lru_cache(maxsize=None)
def _gauss_hermite_cached(q: int) -> QuadratureRule:
    if q == 1:
        nodes = np.zeros(1)
    else:
        off_diag = np.sqrt(np.arange(1, q) / 2.0)
        nodes = eigh_tridiagonal(
            np.zeros(q), off_diag, eigvals_only=True, lapack_driver="stebz"
        )
        # enforce exact symmetry about 0
        nodes = 0.5 * (nodes - nodes[::-1])
    psi = eval_ghf_all(q - 1, nodes, BasisParams(alpha=1.0))
    modified = 1.0 / np.sum(psi * psi, axis=0)
    modified = 0.5 * (modified + modified[::-1])
    # raw weights via logs: exp(-z^2) alone dips below the double range
    weights = np.exp(np.log(modified) - nodes**2)
    for arr in (nodes, weights, modified):
        arr.flags.writeable = False
    return QuadratureRule(nodes, weights, modified, q)


def gauss_hermite(q: int) -> QuadratureRule:
    """Return the q-point Gauss-Hermite rule for the weight exp(-z^2)."""
    if q < 1:
        raise ParameterError(f"node count must be >= 1, got {q}")
    if q > MAX_NODES:
        raise CapabilityError(
            f"rules beyond {MAX_NODES} nodes lose accuracy in double precision"
            f" (requested {q})"
        )
    return _gauss_hermite_cached(q)


def _mapped_nodes(rule: QuadratureRule, params: BasisParams) -> np.ndarray:
    return rule.nodes / params.alpha + params.beta


def integrate(f, rule: QuadratureRule, params: BasisParams) -> float:
    """Integrate f over the real line under the map z = alpha (x - beta).

    f must be vectorized over x and decay at least like
    exp(-alpha^2 (x - beta)^2) for the result to be meaningful.
    """
    xs = _mapped_nodes(rule, params)
    vals = np.asarray(f(xs), dtype=float)
    if vals.shape != xs.shape:
        raise IntegrationError(
            f"integrand returned shape {vals.shape} for {xs.shape} nodes"
        )
    if not np.all(np.isfinite(vals)):
        bad = xs[~np.isfinite(vals)][0]
        raise IntegrationError(f"integrand non-finite at x = {bad}", node=bad)
    return float(rule.modified_weights @ vals / params.alpha)


def integrate_factored(smooth, rule: QuadratureRule, params: BasisParams) -> float:
    """Integrate smooth(x) * exp(-alpha^2 (x - beta)^2) without reweighting.

    Takes only the smooth factor; the Gaussian is supplied by the rule's raw
    weights.  Preferable when the integrand's Gaussian part is known exactly,
    since no exp(z^2) factor (implicit or explicit) enters at all.
    """
    xs = _mapped_nodes(rule, params)
    vals = np.asarray(smooth(xs), dtype=float)
    if not np.all(np.isfinite(vals)):
        bad = xs[~np.isfinite(vals)][0]
        raise IntegrationError(f"integrand non-finite at x = {bad}", node=bad)
    return float(rule.weights @ vals / params.alpha)


@dataclass(frozen=True)
class TripleProductTensor:
    """Reference values T[l, n, m] = int psi_l psi_n psi_m dz.

    psi is the alpha = 1, beta = 0 basis.  The tensor is fully symmetric,
    vanishes whenever l + n + m is odd, and rescales to any basis by

        int H_l H_n H_m dx = sqrt(alpha) T[l, n, m],

    independent of beta.
    """

    order: int
    entries: np.ndarray


@lru_cache(maxsize=None)
def _triple_tensor_cached(N: int) -> TripleProductTensor:
    # substituting w = sqrt(3/2) z turns psi_l psi_n psi_m dz into
    # sqrt(2/3) * (polynomial of degree l+n+m)(w) * exp(-w^2) dw,
    # so a rule with q = ceil(3N/2) + 1 nodes is exact for every entry
    q = -(-3 * N // 2) + 1
    rule = gauss_hermite(q)
    z = np.sqrt(2.0 / 3.0) * rule.nodes
    psi = eval_ghf_all(N, z, BasisParams(alpha=1.0))
    weighted = psi * rule.modified_weights
    entries = np.sqrt(2.0 / 3.0) * np.einsum(
        "li,ni,mi->lnm", weighted, psi, psi, optimize=True
    )
    entries.flags.writeable = False
    return TripleProductTensor(N, entries)


def triple_product_tensor(N: int) -> TripleProductTensor:
    """Build (and cache) the triple-product tensor of order N."""
    if N < 0:
        raise ParameterError(f"tensor order must be >= 0, got {N}")
    return _triple_tensor_cached(N)
