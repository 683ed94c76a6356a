import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from rglab import tdse


def test_delta_eigenvalue_converges_second_order():
    errs = []
    for h in (0.1, 0.05, 0.025):
        grid = tdse.Grid1D.line(h, half_width=20)
        vals, _ = tdse.lowest_eigenpairs(grid, tdse.PotentialSpec.zero(grid, Fraction(-2)))
        errs.append(abs(vals[0] + 1.0))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all((orders > 1.8) & (orders < 2.2))


def test_hydrogen_ground_state_on_half_line():
    grid = tdse.Grid1D.half_line(0.01, length=40)
    pot = tdse.PotentialSpec(static_part=-1.0 / np.maximum(grid.x, 1e-300) * (grid.x > 0))
    vals, _ = tdse.lowest_eigenpairs(grid, pot)
    assert vals[0] == pytest.approx(-0.25, abs=2e-3)


def test_stationary_density_drift():
    grid = tdse.Grid1D.line()
    pot = tdse.PotentialSpec.zero(grid, Fraction(-2))
    _, (gs,) = tdse.lowest_eigenpairs(grid, pot)
    traj = tdse.propagate(gs, pot, 1.0, 0.01)
    assert np.max(np.abs(traj.densities - traj.densities[0])) < 1e-8
    assert traj.max_step_drift < 1e-12


def test_free_gaussian_order():
    errs = []
    for j in range(3):
        grid = tdse.Grid1D.line(0.1 / 2**j)
        psi0 = tdse.WaveField.from_function(grid, lambda x: tdse.free_gaussian(x, 0.0))
        traj = tdse.propagate(psi0, tdse.PotentialSpec.zero(grid), 1.0, 0.01 / 2**j)
        errs.append(tdse.l2_error(traj.final_state, tdse.free_gaussian(grid.x, 1.0)))
    orders = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all((orders >= 1.7) & (orders <= 2.3))


def test_free_gaussian_oracle_normalized():
    x = np.linspace(-100, 100, 20001)
    for t in (0.0, 1.0, 3.0):
        assert np.sum(np.abs(tdse.free_gaussian(x, t)) ** 2) * (x[1] - x[0]) == pytest.approx(1.0, rel=1e-10)


@given(st.floats(-3, 3), st.floats(-3, 3))
def test_gauge_shift_leaves_density(c0, c1):
    grid = tdse.Grid1D.line(0.1, half_width=20)
    base = 0.1 * grid.x**2 * np.exp(-grid.x**2 / 18)
    psi0 = tdse.WaveField.from_function(grid, lambda x: np.exp(-(x - 0.5) ** 2))
    a = tdse.propagate(psi0, tdse.PotentialSpec(static_part=base), 0.2, 0.01)
    shifted = tdse.PotentialSpec(static_part=base, profile=lambda t: np.full(grid.n_points, c0 + c1 * t))
    b = tdse.propagate(psi0, shifted, 0.2, 0.01)
    assert np.max(np.abs(a.densities - b.densities)) < 1e-12


@given(st.integers(0, 3), st.integers(0, 5))
def test_one_sided_weights_exact_on_polynomials(m, p):
    n = m + 2
    if p >= n:
        return
    w = tdse.one_sided_weights(m, n)
    t = np.arange(n, dtype=float)
    expected = float(math.factorial(m)) if p == m else 0.0
    assert np.dot(w, t**p) == pytest.approx(expected, abs=1e-9)


def test_fd_on_smooth_series_converges():
    dt = 0.01
    ts = dt * np.arange(20)
    res = tdse.fd_time_derivative(np.cos(ts), 2, dt)
    assert res.converged
    assert res.value == pytest.approx(-1.0, abs=1e-6)


def test_fd_flags_sqrt_singularity():
    res = tdse.fd_time_derivative([np.sqrt(t) for t in 1e-3 * np.arange(20)], 2, 1e-3)
    assert not res.converged


def test_kink_oracle_matches_quadrature():
    for t in (1e-3, 1e-2, 0.1, 1.0):
        assert abs(tdse.kink_value_at_origin(t) - tdse.kink_value_at_origin_quadrature(t)) < 1e-8


def test_fd_needs_enough_samples():
    with pytest.raises(ValueError):
        tdse.fd_time_derivative(np.zeros(5), 2, 0.1)


def test_potential_digest_stable():
    grid = tdse.Grid1D.line(0.1, half_width=5)
    a = tdse.PotentialSpec.zero(grid, Fraction(-2))
    b = tdse.PotentialSpec.zero(grid, Fraction(-2))
    assert a.digest() == b.digest()
    assert a.digest() != tdse.PotentialSpec.zero(grid, Fraction(1)).digest()


def test_hamiltonian_symmetric():
    grid = tdse.Grid1D.line(0.1, half_width=5)
    pot = tdse.PotentialSpec(static_part=np.sin(grid.x), delta_strength=Fraction(-1))
    dense = tdse.build_hamiltonian(grid, pot).to_dense()
    assert np.allclose(dense, dense.T)


def test_fd_exact_on_quadratic():
    dt = 0.1
    res = tdse.fd_time_derivative((dt * np.arange(13)) ** 2, 2, dt)
    assert res.value == pytest.approx(2.0, abs=1e-10)
