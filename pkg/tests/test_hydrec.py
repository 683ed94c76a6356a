from fractions import Fraction

import pytest
import sympy as sp

from rglab import hydrec

r = sp.Symbol("r", positive=True)


def test_cumulative_vector_small_cases():
    assert hydrec.cumulative_vector(1) == (1, 2)
    assert hydrec.cumulative_vector(2) == (8, 24)
    assert hydrec.cumulative_vector(3) == (184, 720)


def test_t_matrix_from_series():
    # h0 applied to a r^(2n-1) + b r^(2n) gives -T_n (a, b) on the pair (r^(2n-3), r^(2n-2))
    a, b = sp.symbols("a b")
    for n in range(2, 6):
        f = a * r ** (2 * n - 1) + b * r ** (2 * n)
        g = sp.expand(-sp.diff(f, r, 2) - f / r)
        t = hydrec.t_matrix(n)
        lead = (g.coeff(r, 2 * n - 3), g.coeff(r, 2 * n - 2))
        for row, got in zip(t, lead):
            assert sp.expand(-(row[0] * a + row[1] * b) - got) == 0


def test_spot_determinants():
    assert hydrec.assemble_system(2).det == Fraction(64, 3)
    assert hydrec.assemble_system(3).det == Fraction(608, 3)
    assert hydrec.assemble_system(3).matrix == ((Fraction(-104, 3), 56), (Fraction(-22, 3), 6))


@pytest.mark.parametrize("k", range(2, 51))
def test_closed_form_positive_kernel_trivial(k):
    det = hydrec.determinant_closed_form_check(k)
    assert det > 0
    assert hydrec.assemble_system(k).kernel() == []


@pytest.mark.parametrize("k", range(2, 13))
def test_rows_from_symbolic_expansion(k):
    assert hydrec.system_rows_from_expansion(k) == hydrec.assemble_system(k).matrix


def test_higher_order_terms_of_potential_do_not_matter():
    extra = ((Fraction(5), 7), (Fraction(1), 9))
    assert hydrec.system_rows_from_expansion(3, extra) == hydrec.assemble_system(3).matrix


def test_psi_jets_match_sympy():
    expr = sp.Rational(16, 3) * r * (sp.exp(-r / 2) - (1 - r / 4) * sp.exp(-r / 4))
    series = sp.series(expr, r, 0, 5).removeO()
    checks = hydrec.check_two_state_probe()
    assert [series.coeff(r, j) * sp.factorial(j) for j in range(4)] == [0, 0, 0, 1]
    h_expr = -sp.diff(expr, r, 2) - expr / r
    assert sp.limit(sp.diff(h_expr, r), r, 0) == -1
    assert checks.ok


def test_lower_bound_factor():
    assert hydrec.determinant_lower_bound_factor(2) == Fraction(4, 5)
    assert all(hydrec.determinant_lower_bound_factor(k) > 0 for k in range(2, 51))


def test_invalid_indices():
    with pytest.raises(ValueError):
        hydrec.t_matrix(1)
    with pytest.raises(ValueError):
        hydrec.assemble_system(1)


@pytest.mark.parametrize("n,expected", [(2, ((6, 0), (1, 12))), (3, ((20, 0), (1, 30))), (10, ((342, 0), (1, 380)))])
def test_t_matrix_entries(n, expected):
    assert hydrec.t_matrix(n) == expected
