"""Gauss-Hermite rules, weighted integration, and the triple-product tensor."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy.polynomial.hermite import hermgauss
from scipy.special import gammaln, logsumexp

from hermsolve import (
    BasisParams,
    CapabilityError,
    IntegrationError,
    ParameterError,
    eval_ghf_all,
    gauss_hermite,
    integrate_factored,
    triple_product_tensor,
)
from hermsolve.quadrature import MAX_NODES, integrate


def test_rule_examples():
    r1 = gauss_hermite(1)
    assert r1.nodes == pytest.approx([0.0])
    assert r1.weights == pytest.approx([np.sqrt(np.pi)])
    r2 = gauss_hermite(2)
    assert r2.nodes == pytest.approx([-np.sqrt(0.5), np.sqrt(0.5)], rel=1e-15)
    assert r2.weights == pytest.approx([np.sqrt(np.pi) / 2.0] * 2, rel=1e-14)


def test_rule_validation():
    with pytest.raises(ParameterError):
        gauss_hermite(0)
    with pytest.raises(CapabilityError):
        gauss_hermite(MAX_NODES + 1)


def test_rule_is_cached_and_read_only():
    a = gauss_hermite(17)
    assert a is gauss_hermite(17)
    with pytest.raises(ValueError):
        a.nodes[0] = 1.0


def test_nodes_and_weights_match_hermgauss():
    # the reference implementation is only finite up to q near 100
    for q in (3, 10, 40, 100):
        x, w = hermgauss(q)
        r = gauss_hermite(q)
        assert np.allclose(r.nodes, x, rtol=0, atol=5e-14)
        assert np.allclose(r.weights, w, rtol=5e-13, atol=1e-290)


@pytest.mark.parametrize("q", [1, 2, 8, 80, 160, 500])
def test_degree_of_exactness(q):
    # even moments of e^{-z^2} up to degree 2q-1, evaluated in log space
    r = gauss_hermite(q)
    log_mw = np.log(r.modified_weights)
    z = r.nodes
    for k in range(0, q, max(1, q // 7)):
        deg = 2 * k
        if deg > 2 * q - 1:
            break
        if deg == 0:
            terms = log_mw - z**2
        else:
            with np.errstate(divide="ignore", invalid="ignore"):
                logz = np.where(z == 0, -np.inf, np.log(np.abs(z)))
            terms = log_mw - z**2 + deg * logz
        got = logsumexp(terms)
        want = gammaln(k + 0.5)
        assert got == pytest.approx(want, abs=1e-12, rel=1e-12)


def test_odd_moments_annihilate():
    r = gauss_hermite(33)
    for deg in (1, 3, 11):
        val = np.sum(r.modified_weights * np.exp(-r.nodes**2) * r.nodes**deg)
        assert abs(val) < 1e-13


def test_integrate_examples():
    p = BasisParams(alpha=1.0)
    r = gauss_hermite(32)
    assert integrate(lambda x: np.exp(-(x**2)), r, p) == pytest.approx(
        np.sqrt(np.pi), abs=1e-14
    )

    def h0_h1(x):
        H = eval_ghf_all(1, x, p)
        return H[0] * H[1]

    assert abs(integrate(h0_h1, r, p)) < 1e-14

    def h3_sq(x):
        return eval_ghf_all(3, x, p)[3] ** 2

    assert integrate(h3_sq, r, p) == pytest.approx(1.0, abs=1e-12)


def test_integrate_respects_basis_map():
    # a Gaussian matched to the mapped basis integrates exactly
    p = BasisParams(alpha=0.6, beta=2.0)
    r = gauss_hermite(24)
    got = integrate(lambda x: np.exp(-0.36 * (x - 2.0) ** 2), r, p)
    assert got == pytest.approx(np.sqrt(np.pi) / 0.6, rel=1e-14)


def test_integrate_nonfinite_reports_node():
    p = BasisParams(alpha=1.0)
    r = gauss_hermite(8)

    def bad(x):
        return np.where(x > 0, np.inf, 1.0)

    with pytest.raises(IntegrationError) as info:
        integrate(bad, r, p)
    assert info.value.node is not None and info.value.node > 0


def test_parity_annihilation():
    p = BasisParams(alpha=1.2, beta=-0.8)
    r = gauss_hermite(40)
    # odd about beta, Gaussian-enveloped so the tails vanish
    val = integrate(
        lambda x: (x + 0.8) ** 3 * np.exp(-1.44 * (x + 0.8) ** 2 / 2.0), r, p
    )
    assert abs(val) < 1e-13


def test_integrate_factored_agrees_with_naive():
    p = BasisParams(alpha=1.1, beta=0.2)
    r = gauss_hermite(20)
    naive = integrate(
        lambda x: np.sin(x) * np.exp(-1.21 * (x - 0.2) ** 2), r, p
    )
    factored = integrate_factored(np.sin, r, p)
    assert factored == pytest.approx(naive, rel=1e-13)


def test_triple_tensor_order_and_validation():
    t = triple_product_tensor(6)
    assert t.order == 6
    assert t.entries.shape == (7, 7, 7)
    assert t is triple_product_tensor(6)
    with pytest.raises(ParameterError):
        triple_product_tensor(-1)


def test_triple_tensor_000():
    t = triple_product_tensor(2)
    want = np.sqrt(2.0 / 3.0) * np.pi**-0.25
    assert t.entries[0, 0, 0] == pytest.approx(want, rel=1e-13)


def test_triple_tensor_symmetry_and_parity():
    t = triple_product_tensor(8).entries
    assert np.allclose(t, np.transpose(t, (1, 0, 2)), atol=1e-15)
    assert np.allclose(t, np.transpose(t, (2, 1, 0)), atol=1e-15)
    # integrand parity: entries with odd index sum vanish
    for l in range(9):
        for n in range(9):
            for m in range(9):
                if (l + n + m) % 2 == 1:
                    assert abs(t[l, n, m]) < 1e-14


@settings(max_examples=20, deadline=None)
@given(
    alpha=st.floats(0.4, 3.0),
    beta=st.floats(-1.5, 1.5),
    l=st.integers(0, 10),
    n=st.integers(0, 10),
    m=st.integers(0, 10),
)
def test_triple_tensor_scaling_law(alpha, beta, l, n, m):
    # sqrt(alpha) * T[l, n, m] equals the integral of three mapped functions
    t = triple_product_tensor(10)
    p = BasisParams(alpha=alpha, beta=beta)
    r = gauss_hermite(64)

    def three(x):
        H = eval_ghf_all(10, x, p)
        return H[l] * H[n] * H[m]

    direct = integrate(three, r, p)
    assert abs(np.sqrt(alpha) * t.entries[l, n, m] - direct) < 1e-11
