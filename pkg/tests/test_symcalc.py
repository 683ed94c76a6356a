from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from rglab.symcalc import (
    DeltaHamiltonian,
    DivergentIntegralError,
    HalfLineFunction,
    LineFunction,
    RadialHamiltonian,
    SingularTermError,
    apply_delta_hamiltonian,
    apply_radial_hamiltonian,
    boundary_jet,
    domain_order,
    iterate,
    l2_inner,
    l2_norm_squared,
)
from rglab.symcalc.domain import DomainReport

fracs = st.fractions(min_value=-3, max_value=3, max_denominator=4)
neg_rates = st.fractions(min_value=-3, max_value=Fraction(-1, 4), max_denominator=4)
term = st.tuples(fracs, st.integers(0, 3), neg_rates)
right_fn = st.lists(term, max_size=3).map(lambda ts: HalfLineFunction.build(ts))
line_fn = st.tuples(st.lists(term, max_size=3), st.lists(term, max_size=3)).map(
    lambda p: LineFunction.build([(c, n, -a) for c, n, a in p[0]], p[1]))

X = sp.Symbol("x", positive=True)


def to_sympy(f: HalfLineFunction):
    return sum((sp.Rational(t.coeff.numerator, t.coeff.denominator) * X**t.power
                * sp.exp(sp.Rational(t.rate.numerator, t.rate.denominator) * X) for t in f.terms), sp.Integer(0))


# -- arithmetic ------------------------------------------------------------------------------

@given(right_fn, right_fn)
def test_product_closure_and_commutativity(f, g):
    assert (f * g - g * f).is_zero
    assert ((f + g) * f - (f * f + g * f)).is_zero


@given(right_fn, right_fn)
def test_leibniz_rule(f, g):
    assert ((f * g).derivative() - (f.derivative() * g + f * g.derivative())).is_zero


@given(right_fn)
def test_derivative_matches_sympy(f):
    assert sp.simplify(to_sympy(f.derivative()) - sp.diff(to_sympy(f), X)) == 0


@given(right_fn, st.floats(0.05, 4.0))
def test_float_evaluation_matches_sympy(f, x):
    assert f(x) == pytest.approx(float(to_sympy(f).subs(X, x)), rel=1e-12, abs=1e-12)


def test_duplicate_terms_merge():
    f = HalfLineFunction.build([(1, 2, -1), (2, 2, -1), (-3, 2, -1)])
    assert f.is_zero and f.terms == ()


def test_mixed_sides_rejected():
    with pytest.raises(ValueError):
        HalfLineFunction.constant(1, "right") + HalfLineFunction.constant(1, "left")


# -- Laurent analysis ------------------------------------------------------------------------------

def test_removable_pole_is_regular():
    # (e^{-x} - 1)/x = -1 + x/2 - ...
    f = HalfLineFunction.build([(1, -1, -1), (-1, -1, 0)])
    assert f.is_regular_at_origin
    assert f.value_at_zero() == -1
    assert f.laurent_coefficient(1) == Fraction(1, 2)


def test_genuine_pole_is_singular():
    f = HalfLineFunction.build([(1, -1, -1)])
    assert f.principal_part() == {-1: 1}
    with pytest.raises(SingularTermError):
        f.value_at_zero()


@given(right_fn, st.integers(0, 4))
def test_laurent_coefficient_matches_taylor(f, q):
    expected = sp.series(to_sympy(f), X, 0, q + 1).removeO().coeff(X, q)
    assert f.laurent_coefficient(q) == Fraction(int(sp.numer(expected)), int(sp.denom(expected)))


@given(right_fn, st.integers(0, 5))
def test_jet_consistency_under_differentiation(f, n):
    jet = boundary_jet(f, "0+", n + 1)
    djet = boundary_jet(f.derivative(), "0+", n)
    assert tuple(jet.coefficients[1:]) == tuple(djet.coefficients)


# -- domain checks ------------------------------------------------------------------------------

@pytest.mark.parametrize("lam", [Fraction(-2), Fraction(-1), Fraction(-1, 3)])
def test_bound_state_is_fixed_point(lam):
    f = LineFunction.exp_abs(lam / 2)
    image, rep = apply_delta_hamiltonian(f, lam)
    assert rep.in_domain
    assert (image - f.scale(-lam * lam / 4)).is_zero
    assert domain_order(f, DeltaHamiltonian(lam), 10).max_order == 10


def test_kink_in_delta_domain_not_free_domain():
    f = LineFunction.exp_abs(-1)
    assert domain_order(f, DeltaHamiltonian(-2), 10).in_domain
    rep = domain_order(f, DeltaHamiltonian(0), 3)
    assert rep.max_order == 0 and rep.first_violation == (0, "jump")


def test_discontinuous_function_flags_continuity():
    f = LineFunction.build([(1, 0, 1)], [(2, 0, -1)])
    rep = domain_order(f, DeltaHamiltonian(1), 2)
    assert rep.first_violation == (0, "continuity")


def test_growing_function_flags_integrability():
    f = LineFunction.build([(1, 0, 1)], [(1, 0, 1)])
    assert domain_order(f, DeltaHamiltonian(1), 2).first_violation == (0, "integrability")


def test_domain_order_stops_at_first_failure():
    # odd x e^{-|x|}: in D(h) since f(0) = 0 and f' is continuous, but -f'' is odd with value +-2 at 0
    f = LineFunction.build([(1, 1, 1)], [(1, 1, -1)])
    rep = domain_order(f, DeltaHamiltonian(-2), 5)
    assert rep.max_order == 1
    assert rep.first_violation == (1, "continuity")


@given(st.integers(0, 3))
def test_domain_order_monotone_in_k_max(k):
    f = LineFunction.build([(1, 1, 1)], [(1, 1, -1)])
    a = domain_order(f, DeltaHamiltonian(-2), k + 1).max_order
    b = domain_order(f, DeltaHamiltonian(-2), k + 2).max_order
    assert a <= b


def test_radial_dirichlet_and_singular_conditions():
    _, rep = apply_radial_hamiltonian(HalfLineFunction.build([(1, 0, -1)]))
    assert rep.first_violation == (0, "dirichlet")
    _, rep = apply_radial_hamiltonian(HalfLineFunction.build([(1, -1, -1)]))
    assert rep.first_violation == (0, "singular-term")


def test_radial_ground_state_is_eigenfunction():
    # r e^{-r/2} has eigenvalue -1/4 for -d^2/dr^2 - 1/r
    f = HalfLineFunction.build([(1, 1, Fraction(-1, 2))])
    image, rep = RadialHamiltonian().apply(f)
    assert rep.in_domain
    assert (image - f.scale(Fraction(-1, 4))).is_zero


def test_report_requires_violation_iff_short():
    with pytest.raises(ValueError):
        DomainReport(1, 2)
    with pytest.raises(ValueError):
        DomainReport(2, 2, (1, "jump"))


# -- inner products ---------------------------------------------------------------------------------

def reflect(f: HalfLineFunction) -> HalfLineFunction:
    """``x -> f(-x)`` moved onto the right half-line."""
    return HalfLineFunction.build([(t.coeff * (-1) ** t.power, t.power, -t.rate) for t in f.terms])


def test_l2_norm_matches_sympy():
    f = LineFunction.build([(3, 2, 1)], [(1, 1, -2), (-1, 0, -1)])
    exact = (sp.integrate(to_sympy(f.right) ** 2, (X, 0, sp.oo))
             + sp.integrate(to_sympy(reflect(f.left)) ** 2, (X, 0, sp.oo)))
    assert l2_norm_squared(f) == Fraction(str(sp.nsimplify(exact)))


@given(line_fn, line_fn, fracs)
def test_l2_symmetric_and_bilinear(f, g, c):
    assert l2_inner(f, g) == l2_inner(g, f)
    assert l2_inner(f.scale(c) + g, g) == c * l2_inner(f, g) + l2_inner(g, g)


@given(line_fn)
def test_l2_positive(f):
    n = l2_norm_squared(f)
    assert n >= 0 and (n == 0) == f.is_zero


def test_l2_divergence_raises():
    with pytest.raises(DivergentIntegralError):
        l2_norm_squared(LineFunction.constant(1))


def test_analytic_vector_norms_constant():
    psi0 = LineFunction.exp_abs(-1)
    for k in range(6):
        assert l2_norm_squared(iterate(psi0, DeltaHamiltonian(-2), k)) == 1


# -- serialization ------------------------------------------------------------------------------------

@given(line_fn)
def test_json_round_trip(f):
    assert LineFunction.from_json(f.to_json()) == f
