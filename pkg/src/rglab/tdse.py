"""Crank-Nicolson propagation of the one-particle Schrodinger equation in 1D.

Units are ``2m = hbar = 1``, so ``i psi_t = -psi_xx + V psi``. Grids carry
hard Dirichlet walls at both ends (and at the origin on the half-line); the
unknowns are the interior nodes. A point interaction ``lam*delta`` is put on
the node nearest the origin as ``lam/h`` on the diagonal.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Callable, Literal, Mapping, Optional, Sequence

import numpy as np
from scipy.integrate import quad
from scipy.linalg import eigh_tridiagonal, solve_banded
from scipy.special import erfc

Geometry = Literal["line", "half-line"]


class InstabilityError(RuntimeError):
    """Cumulative norm drift exceeded the allowed budget."""


class ReflectionBudgetError(RuntimeError):
    """Too much probability reached the artificial walls."""


@dataclass(frozen=True)
class Grid1D:
    x_min: float
    x_max: float
    n_points: int
    geometry: Geometry = "line"

    def __post_init__(self):
        if self.n_points < 16:
            raise ValueError("n_points must be >= 16")
        if self.x_max <= self.x_min:
            raise ValueError("x_max must exceed x_min")
        if self.geometry == "half-line" and self.x_min != 0:
            raise ValueError("half-line grids start at the origin")
        if self.geometry not in ("line", "half-line"):
            raise ValueError(f"unknown geometry {self.geometry!r}")

    @classmethod
    def line(cls, h: float = 0.05, half_width: float = 40.0) -> "Grid1D":
        n = int(round(2 * half_width / h)) + 1
        return cls(-half_width, half_width, n, "line")

    @classmethod
    def half_line(cls, h: float = 0.05, length: float = 60.0) -> "Grid1D":
        n = int(round(length / h)) + 1
        return cls(0.0, length, n, "half-line")

    @property
    def spacing(self) -> float:
        return (self.x_max - self.x_min) / (self.n_points - 1)

    @property
    def x(self) -> np.ndarray:
        return np.linspace(self.x_min, self.x_max, self.n_points)

    @property
    def interior(self) -> slice:
        return slice(1, self.n_points - 1)

    def origin_index(self) -> int:
        return int(np.argmin(np.abs(self.x)))

    def wall_mask(self, fraction: float = 0.1) -> np.ndarray:
        """Nodes within ``fraction`` of the span from an outer wall (not the half-line origin)."""
        width = fraction * (self.x_max - self.x_min)
        x = self.x
        mask = x >= self.x_max - width
        if self.geometry == "line":
            mask |= x <= self.x_min + width
        return mask

    def to_dict(self) -> dict:
        return {"x_min": self.x_min, "x_max": self.x_max, "n_points": self.n_points,
                "geometry": self.geometry, "h": self.spacing}


@dataclass(frozen=True)
class WaveField:
    values: np.ndarray
    grid: Grid1D

    def __post_init__(self):
        if self.values.shape != (self.grid.n_points,):
            raise ValueError("values do not match the grid")
        if not np.all(np.isfinite(self.values)):
            raise ValueError("wavefunction has non-finite entries")

    @property
    def density(self) -> np.ndarray:
        return np.abs(self.values) ** 2

    @property
    def norm_squared(self) -> float:
        return float(np.sum(self.density) * self.grid.spacing)

    def normalized(self) -> "WaveField":
        return WaveField(self.values / np.sqrt(self.norm_squared), self.grid)

    @classmethod
    def from_function(cls, grid: Grid1D, fn: Callable[[np.ndarray], np.ndarray], normalize: bool = True) -> "WaveField":
        vals = np.asarray(fn(grid.x), dtype=complex).copy()
        vals[0] = vals[-1] = 0.0
        wf = cls(vals, grid)
        return wf.normalized() if normalize else wf


@dataclass(frozen=True)
class PotentialSpec:
    """``V(t, x) = static + sum_l t^l/l! * d_t^l V(0, x)`` or ``static + profile(t)``.

    ``delta_strength`` adds ``lam*delta(x)`` (line geometry only).
    """

    static_part: np.ndarray
    delta_strength: Fraction | float = 0
    time_part: tuple[tuple[int, np.ndarray], ...] = ()
    profile: Optional[Callable[[float], np.ndarray]] = field(default=None, compare=False)
    label: str = ""

    def __post_init__(self):
        if not np.all(np.isfinite(self.static_part)):
            raise ValueError("static potential has non-finite samples")
        for order, arr in self.time_part:
            if not 1 <= order <= 6:
                raise ValueError("time Taylor orders must lie in 1..6")
            if arr.shape != self.static_part.shape or not np.all(np.isfinite(arr)):
                raise ValueError("time-derivative samples must be finite and match the grid")

    @classmethod
    def zero(cls, grid: Grid1D, delta_strength=0) -> "PotentialSpec":
        return cls(np.zeros(grid.n_points), delta_strength)

    @property
    def is_static(self) -> bool:
        return not self.time_part and self.profile is None

    def at(self, t: float) -> np.ndarray:
        v = np.array(self.static_part, dtype=float)
        for order, arr in self.time_part:
            v = v + t ** order / factorial(order) * arr
        if self.profile is not None:
            v = v + np.asarray(self.profile(t), dtype=float)
        return v

    def digest(self) -> str:
        h = hashlib.sha256()
        h.update(np.ascontiguousarray(self.static_part, dtype=float).tobytes())
        h.update(str(Fraction(self.delta_strength).limit_denominator(10**12)).encode())
        for order, arr in self.time_part:
            h.update(str(order).encode())
            h.update(np.ascontiguousarray(arr, dtype=float).tobytes())
        h.update(self.label.encode())
        return h.hexdigest()[:16]


@dataclass(frozen=True)
class Tridiagonal:
    """Symmetric tridiagonal operator on the interior nodes."""

    diag: np.ndarray
    off: np.ndarray

    def matvec(self, v: np.ndarray) -> np.ndarray:
        out = self.diag * v
        out[:-1] += self.off * v[1:]
        out[1:] += self.off * v[:-1]
        return out

    def to_dense(self) -> np.ndarray:
        return np.diag(self.diag) + np.diag(self.off, 1) + np.diag(self.off, -1)


def build_hamiltonian(grid: Grid1D, potential: PotentialSpec, t: float = 0.0, shift: float = 0.0) -> Tridiagonal:
    """Three-point Laplacian plus diagonal potential on the interior nodes.

    ``shift`` is subtracted from the potential (used to fix the gauge).
    """
    h = grid.spacing
    n_int = grid.n_points - 2
    v = potential.at(t)[grid.interior] - shift
    diag = np.full(n_int, 2.0 / h**2) + v
    lam = float(potential.delta_strength)
    if lam != 0:
        if grid.geometry != "line":
            raise ValueError("point interactions are only supported on the line")
        diag[grid.origin_index() - 1] += lam / h
    off = np.full(n_int - 1, -1.0 / h**2)
    return Tridiagonal(diag, off)


def lowest_eigenpairs(grid: Grid1D, potential: PotentialSpec, count: int = 1) -> tuple[np.ndarray, list[WaveField]]:
    """Lowest discrete eigenvalues and grid-normalized eigenvectors of ``H(0)``."""
    ham = build_hamiltonian(grid, potential, 0.0)
    vals, vecs = eigh_tridiagonal(ham.diag, ham.off, select="i", select_range=(0, count - 1))
    states = []
    for j in range(count):
        full = np.zeros(grid.n_points, dtype=complex)
        full[grid.interior] = vecs[:, j]
        states.append(WaveField(full, grid).normalized())
    return vals, states


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    densities: np.ndarray
    observables: Mapping[str, np.ndarray]
    final_state: WaveField
    norm_drift: float
    max_step_drift: float
    wall_mass: float

    @property
    def grid(self) -> Grid1D:
        return self.final_state.grid


def propagate(
    psi0: WaveField,
    potential: PotentialSpec,
    t_end: float,
    dt: float,
    observables: Optional[Mapping[str, np.ndarray]] = None,
    record_every: int = 1,
    norm_budget: float = 1e-6,
    wall_budget: Optional[float] = 1e-8,
    gauge_fix: bool = True,
) -> Trajectory:
    """Crank-Nicolson with the Hamiltonian evaluated at the step midpoint.

    The Cayley map of ``H + c`` is not a phase times the Cayley map of ``H``,
    so plain Crank-Nicolson is not gauge covariant. With ``gauge_fix`` the
    density-weighted mean ``c`` of ``V(t)`` is removed before each step and
    the phase ``exp(-i c dt)`` applied exactly. Any shift with
    ``c[V + const] = c[V] + const`` restores covariance; weighting by the
    density keeps the shift blind to changes of ``V`` far from the particle.

    Densities and observables ``sum rho*phi*h`` are recorded every
    ``record_every`` steps (always including ``t=0`` and the final time).
    """
    if dt <= 0 or t_end < 0:
        raise ValueError("need dt > 0 and t_end >= 0")
    n_steps = int(round(t_end / dt))
    if abs(n_steps * dt - t_end) > 1e-9 * max(1.0, t_end):
        raise ValueError("t_end must be an integer multiple of dt")
    if n_steps > 10**7:
        raise ValueError("too many time steps")
    grid = psi0.grid
    h = grid.spacing
    observables = dict(observables or {})
    interior = grid.interior
    psi = psi0.values[interior].astype(complex)
    norm0 = float(np.sum(np.abs(psi) ** 2) * h)

    times, rows = [], []
    obs_series: dict[str, list[float]] = {k: [] for k in observables}

    def record(t, vec):
        rho = np.zeros(grid.n_points)
        rho[interior] = np.abs(vec) ** 2
        times.append(t)
        rows.append(rho)
        for name, phi in observables.items():
            obs_series[name].append(float(np.sum(rho * phi) * h))

    record(0.0, psi)
    ab = np.zeros((3, psi.size), dtype=complex)
    max_step = 0.0
    prev_norm = norm0
    shift = 0.0
    v_static = potential.at(0.0)[interior] if potential.is_static else None
    for step in range(n_steps):
        t_mid = (step + 0.5) * dt
        if gauge_fix:
            v_mid = v_static if v_static is not None else potential.at(t_mid)[interior]
            weights = np.abs(psi) ** 2
            shift = float(np.sum(weights * v_mid) / np.sum(weights))
        if gauge_fix or not potential.is_static or step == 0:
            ham = build_hamiltonian(grid, potential, t_mid, shift)
            ab[0, 1:] = 0.5j * dt * ham.off
            ab[1, :] = 1.0 + 0.5j * dt * ham.diag
            ab[2, :-1] = 0.5j * dt * ham.off
        rhs = psi - 0.5j * dt * ham.matvec(psi)
        psi = solve_banded((1, 1), ab, rhs, check_finite=False)
        if shift != 0.0:
            psi = psi * np.exp(-1j * shift * dt)
        norm = float(np.sum(np.abs(psi) ** 2) * h)
        max_step = max(max_step, abs(norm - prev_norm) / norm0)
        prev_norm = norm
        if abs(norm - norm0) / norm0 > norm_budget:
            raise InstabilityError(f"norm drift {abs(norm - norm0) / norm0:.3e} at step {step + 1}")
        if (step + 1) % record_every == 0 or step + 1 == n_steps:
            record((step + 1) * dt, psi)

    densities = np.array(rows)
    wall = float(np.max(densities[:, grid.wall_mask()].sum(axis=1) * h))
    if wall_budget is not None and wall > wall_budget:
        raise ReflectionBudgetError(f"mass {wall:.3e} reached the walls (budget {wall_budget:.0e})")
    final = np.zeros(grid.n_points, dtype=complex)
    final[interior] = psi
    return Trajectory(
        times=np.array(times),
        densities=densities,
        observables={k: np.array(v) for k, v in obs_series.items()},
        final_state=WaveField(final, grid),
        norm_drift=abs(prev_norm - norm0) / norm0,
        max_step_drift=max_step,
        wall_mass=wall,
    )


# -- time derivatives from samples ------------------------------------------------

def one_sided_weights(m: int, n_points: int) -> np.ndarray:
    """Forward-difference weights for ``f^(m)(0)`` from ``f(0), f(1), ..., f(n_points-1)`` (unit step)."""
    if n_points <= m:
        raise ValueError("need more points than the derivative order")
    nodes = np.arange(n_points, dtype=float)
    vander = np.vander(nodes, increasing=True).T
    rhs = np.zeros(n_points)
    rhs[m] = factorial(m)
    return np.linalg.solve(vander, rhs)


@dataclass(frozen=True)
class FDResult:
    value: float
    estimates: tuple[float, float, float]
    steps: tuple[float, float, float]
    richardson: float
    order: Optional[float]
    converged: bool

    def to_dict(self) -> dict:
        return {"value": self.value, "estimates": list(self.estimates), "steps": list(self.steps),
                "richardson": self.richardson, "order": self.order, "converged": self.converged}


def fd_time_derivative(series: Sequence[float], m: int, dt: float, atol: float = 1e-10) -> FDResult:
    """Estimate ``f^(m)(0)`` with second-order one-sided stencils at steps dt, 2dt, 4dt.

    The Richardson value assumes an ``O(s^2)`` error. The observed order is
    ``log2`` of the ratio of successive differences; the estimate is flagged
    as not converging when that order is below 1 (including negative orders,
    which mean the estimates move apart as the step shrinks).
    """
    if not 1 <= m <= 4:
        raise ValueError("derivative order must be in 1..4")
    f = np.asarray(series, dtype=float)
    n_stencil = m + 2
    need = 4 * (n_stencil - 1) + 1
    if f.size < need:
        raise ValueError(f"need at least {need} samples for m={m}, got {f.size}")
    w = one_sided_weights(m, n_stencil)
    ests = []
    for stride in (1, 2, 4):
        samples = f[: stride * (n_stencil - 1) + 1 : stride]
        ests.append(float(w @ samples) / (stride * dt) ** m)
    e1, e2, e4 = ests
    rich = (4 * e1 - e2) / 3
    d_fine, d_coarse = abs(e2 - e1), abs(e4 - e2)
    scale = atol * max(1.0, abs(e1))
    if d_fine <= scale and d_coarse <= scale:
        order, converged = None, True
    elif d_fine == 0:
        order, converged = None, True
    else:
        order = float(np.log2(d_coarse / d_fine)) if d_coarse > 0 else float("-inf")
        oscillatory = (e2 - e1) * (e4 - e2) < 0
        converged = order >= 1.0 and not oscillatory
    return FDResult(rich if converged else e1, (e1, e2, e4), (dt, 2 * dt, 4 * dt), rich, order, converged)


# -- closed-form references ---------------------------------------------------------

def free_gaussian(x: np.ndarray, t: float, alpha: float = 1.0, k0: float = 1.0, x0: float = 0.0) -> np.ndarray:
    """Free evolution of ``exp(-alpha (x-x0)^2 + i k0 (x-x0))``, normalized in L2(R)."""
    beta = 1j * k0
    denom = 1 + 4j * alpha * t
    y = x - x0
    norm = (2 * alpha / np.pi) ** 0.25
    return norm * denom ** -0.5 * np.exp((-alpha * y**2 + beta * y + 1j * beta**2 * t) / denom)


def kink_value_at_origin(t: float) -> complex:
    """``psi(t, 0)`` for ``psi0 = exp(-|x|)`` under free evolution: ``e^(it) erfc(sqrt(i t))``."""
    return complex(np.exp(1j * t) * erfc(np.sqrt(1j * t)))


def kink_value_at_origin_quadrature(t: float) -> complex:
    """Same value from the propagator integral ``(1/pi) int e^(-i u t) / ((1+u) sqrt(u)) du``."""
    if t == 0:
        return 1.0 + 0j
    near = [quad(lambda u, fn=fn: fn(u * t) / (1 + u), 0, 1, weight="alg", wvar=(-0.5, 0),
                 epsabs=1e-13, epsrel=1e-12)[0] for fn in (np.cos, np.sin)]
    far = [quad(lambda u: 1 / ((1 + u) * np.sqrt(u)), 1, np.inf, weight=w, wvar=t)[0]
           for w in ("cos", "sin")]
    return complex(near[0] + far[0], -(near[1] + far[1])) / np.pi


def l2_error(a: WaveField, b: np.ndarray) -> float:
    return float(np.sqrt(np.sum(np.abs(a.values - b) ** 2) * a.grid.spacing))
