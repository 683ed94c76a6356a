import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from rglab.twobody import commutator as comm
from rglab.twobody import cusp, hardy, sphere
from rglab.twobody import potentials as pots

QUAD = sphere.SphereQuadrature.product()


# -- sphere rule ----------------------------------------------------------------------------------

def test_second_moment():
    assert np.max(np.abs(sphere.sphere_second_moment(QUAD) - np.eye(3) / 3)) < 1e-12


def test_fourth_moment_and_degree():
    assert QUAD.mean(QUAD.nodes[:, 0] ** 4) == pytest.approx(1 / 5, abs=1e-14)
    assert QUAD.degree == 15
    assert sphere.moment_errors(QUAD, 15) < 1e-13


@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 4))
def test_monomial_moment_matches_sympy(a, b, c):
    th, ph = sp.symbols("theta phi")
    x, y, z = sp.sin(th) * sp.cos(ph), sp.sin(th) * sp.sin(ph), sp.cos(th)
    exact = sp.integrate(sp.integrate(x**a * y**b * z**c * sp.sin(th), (ph, 0, 2 * sp.pi)), (th, 0, sp.pi))
    assert sphere.monomial_moment(a, b, c) == pytest.approx(float(exact) / (4 * math.pi), abs=1e-14)


def test_weights_sum_to_sphere_area():
    assert QUAD.weights.sum() == pytest.approx(4 * math.pi, rel=1e-14)


# -- cusp Hessian -----------------------------------------------------------------------------------

def test_hessian_spot_value():
    hess = cusp.hessian_cusp([0.5, 0, 0], 1.0)
    e = math.exp(1 / 8)
    assert hess[0, 0] == pytest.approx(e / 16, rel=1e-14)
    assert hess[1, 1] == pytest.approx(e / 2, rel=1e-14)
    assert hess[2, 2] == pytest.approx(e / 2, rel=1e-14)


def test_hessian_matches_sympy():
    v = sp.symbols("v1:4", real=True)
    expr = sp.exp(sp.sqrt(sum(c**2 for c in v)) / 4)
    point = {v[0]: sp.Rational(1, 5), v[1]: sp.Rational(-3, 10), v[2]: sp.Rational(1, 10)}
    exact = np.array([[float(sp.diff(expr, a, b).subs(point)) for b in v] for a in v])
    assert np.allclose(cusp.hessian_cusp([0.2, -0.3, 0.1], 1.0), exact, rtol=1e-13, atol=0)


@given(st.lists(st.floats(-1, 1), min_size=3, max_size=3), st.floats(0.02, 0.95), st.floats(0.5, 2))
def test_hessian_vs_finite_differences(direction, radius, f):
    d = np.asarray(direction)
    if np.linalg.norm(d) < 1e-3:
        return
    v = d / np.linalg.norm(d) * radius
    assert cusp.hessian_fd_deviation(v, f) < 1e-6


def test_hessian_rejects_coalescence():
    with pytest.raises(cusp.CuspSingularityError):
        cusp.hessian_cusp([0, 0, 0], 1.0)
    with pytest.raises(cusp.CuspSingularityError):
        cusp.hessian_cusp([1.0, 0, 0], 1.0)


# -- small-sphere limit -------------------------------------------------------------------------------

@pytest.mark.parametrize("r", [0.05, 0.1, 0.3])
def test_bracket_closed_form_for_norm_squared(r):
    # W = 2|u|^2 + |v|^2/2: Hess W = I and grad W = v, so the integrand is (1/4 + 1/r) e^{r/4}
    assert cusp.bracket_mean(pots.norm_squared(), 1.0, (0.3, -0.2, 0.1), r, QUAD) == pytest.approx(
        (1 + r / 4) * math.exp(r / 4), rel=1e-13)


@pytest.mark.parametrize("pot", pots.harmonic_battery(), ids=lambda p: p.name)
def test_harmonic_limits_vanish(pot):
    est = cusp.singular_limit_estimate(pot)
    assert abs(est.limit) < 1e-6
    assert est.kappa is None


def test_kappa_for_norm_squared():
    est = cusp.singular_limit_estimate(pots.norm_squared())
    assert est.kappa == pytest.approx(1 / 6, abs=3 * est.kappa_uncertainty + 1e-6)


def test_limit_scales_linearly_in_f():
    a = cusp.singular_limit_estimate(pots.quartic(), 1.0)
    b = cusp.singular_limit_estimate(pots.quartic(), 2.5)
    assert b.limit == pytest.approx(2.5 * a.limit, rel=1e-12)


def test_degenerate_f_rejected():
    with pytest.raises(cusp.DegenerateLimitError):
        cusp.singular_limit_estimate(pots.norm_squared(), 0.0)


# -- interaction commutator ------------------------------------------------------------------------

@pytest.mark.parametrize("pot", [pots.norm_squared(), pots.cubic_harmonic(), pots.quartic(), pots.linear()],
                         ids=lambda p: p.name)
def test_commutator_identity(pot):
    pts = comm.random_points(np.random.default_rng(1), 6)
    res = comm.interaction_commutator_identity(pts, pot)
    assert res.max_deviation < 1e-6


def test_commutator_is_minus_twice_reference_multiplier():
    pts = comm.random_points(np.random.default_rng(2), 6)
    res = comm.interaction_commutator_identity(pts, pots.norm_squared())
    assert np.allclose(res.ratios_to_reference, -2.0, atol=1e-5)
    # |x|^2: grad difference is 2d, so the multiplier is -2 * 2/|d| = -4/|d|
    xl, xk = np.array([1.0, 0, 0]), np.array([0, 0.5, 0])
    assert comm.exact_multiplier(xl, xk, pots.norm_squared()) == pytest.approx(-4 / np.linalg.norm(xl - xk))


def test_constant_potential_commutes():
    pts = comm.random_points(np.random.default_rng(3), 4)
    res = comm.interaction_commutator_identity(pts, pots.constant())
    assert res.max_deviation < 1e-6


# -- Hardy chain --------------------------------------------------------------------------------------

def test_hardy_y1_gaussian_matches_sympy():
    y = sp.symbols("y1:4", real=True)
    rho, th, ph = sp.symbols("rho theta phi", positive=True)
    f = y[0] * sp.exp(-sum(c**2 for c in y))
    hess_sq = sum(sp.diff(f, a, b) ** 2 for a in y for b in y)
    sph = {y[0]: rho * sp.sin(th) * sp.cos(ph), y[1]: rho * sp.sin(th) * sp.sin(ph), y[2]: rho * sp.cos(th)}
    jac = rho**2 * sp.sin(th)

    def integrate(expr):
        e = sp.simplify(expr.subs(sph) * jac)
        return sp.integrate(sp.integrate(sp.integrate(e, (ph, 0, 2 * sp.pi)), (th, 0, sp.pi)), (rho, 0, sp.oo))

    lhs = integrate(f**2 / sum(c**2 for c in y) ** 2)
    rhs = integrate(hess_sq)
    res = hardy.hardy_chain_verify(hardy.y1_gaussian())
    assert res.lhs == pytest.approx(float(lhs), rel=1e-9)
    assert res.rhs == pytest.approx(float(rhs), rel=1e-9)
    assert res.holds


def test_hardy_random_odd_functions():
    rng = np.random.default_rng(42)
    for _ in range(20):
        res = hardy.hardy_chain_verify(hardy.random_odd_function(rng))
        assert res.holds and res.margin > 0
        assert res.resolution < 1e-8


def test_even_polynomial_rejected():
    with pytest.raises(ValueError):
        hardy.GaussianOddFunction(hardy.Polynomial3({(2, 0, 0): 1.0}))
