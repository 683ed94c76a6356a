"""Density-derivative identities for a single particle on a 1D grid.

For ``f(t) = <psi(t)| phi |psi(t)>`` and ``H = T + V`` with ``T = -d^2/dx^2``
the second derivative at ``t = 0`` is

    f''(0) = -2 Re<T psi | [T, phi] psi> - 2 int rho phi' V' dx,

with ``[T, phi] psi = -phi'' psi - 2 phi' psi'``. The left-hand side is
measured by propagating and differencing ``f``; the right-hand side is
evaluated directly from ``psi0`` with centered differences.

Two potentials that produce the same density must satisfy
``int rho0 |grad(V1 - V2)|^2 = 0``; ``identify_order0`` turns this into a
verdict with an explicit "inconclusive" outcome when the potentials only
differ where the initial density vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Callable, Literal, Optional, Sequence

import numpy as np

from .tdse import (
    FDResult,
    Grid1D,
    PotentialSpec,
    WaveField,
    fd_time_derivative,
    propagate,
)

Verdict = Literal["equal", "distinguished", "inconclusive"]

RHO_FLOOR = 1e-15
DENSITY_TOL = 1e-6
IDENTIFICATION_TOL = 1e-4


class IdentityViolationError(AssertionError):
    """Refined error stagnates above tolerance."""


@dataclass(frozen=True)
class ObservableSpec:
    name: str
    values: np.ndarray
    gradient: np.ndarray
    laplacian: Optional[np.ndarray] = None

    @classmethod
    def from_functions(cls, name: str, grid: Grid1D, fn: Callable, dfn: Callable,
                       d2fn: Optional[Callable] = None, check: bool = True) -> "ObservableSpec":
        x = grid.x
        spec = cls(name, np.asarray(fn(x), float), np.asarray(dfn(x), float),
                   None if d2fn is None else np.asarray(d2fn(x), float))
        if check:
            spec.check_gradient(grid.spacing)
        return spec

    @classmethod
    def constant(cls, grid: Grid1D, c: float = 1.0) -> "ObservableSpec":
        n = grid.n_points
        return cls("constant", np.full(n, c), np.zeros(n), np.zeros(n))

    def check_gradient(self, h: float, tol: float = 1e-8) -> float:
        """Max deviation of the analytic gradient from centered differences.

        Centered differences carry an ``O(h^2)`` error, so the tolerance is
        ``tol + h^2 * max|phi'''|`` with the third derivative itself estimated
        by differences.
        """
        fd = np.gradient(self.values, h)
        dev = float(np.max(np.abs(fd - self.gradient)[1:-1]))
        third = np.gradient(np.gradient(self.gradient, h), h)[2:-2]
        allowed = tol + h**2 * float(np.max(np.abs(third), initial=0.0))
        if dev > allowed:
            raise ValueError(f"gradient of {self.name!r} inconsistent with samples ({dev:.2e} > {allowed:.2e})")
        return dev

    def second_derivative(self, h: float) -> np.ndarray:
        if self.laplacian is not None:
            return self.laplacian
        return np.gradient(self.gradient, h)


def _laplacian(psi: np.ndarray, h: float) -> np.ndarray:
    """Three-point Laplacian with zero Dirichlet data outside the array."""
    padded = np.concatenate(([0], psi, [0]))
    return (padded[2:] - 2 * padded[1:-1] + padded[:-2]) / h**2


@dataclass(frozen=True)
class CommutatorTerms:
    kinetic: float
    potential: float

    @property
    def total(self) -> float:
        return self.kinetic + self.potential


def double_commutator_terms(psi0: WaveField, phi: ObservableSpec, potential: PotentialSpec, t: float = 0.0) -> CommutatorTerms:
    """Kinetic and potential parts of ``-<psi|[H,[H,phi]]psi>``."""
    grid = psi0.grid
    h = grid.spacing
    psi = psi0.values
    if float(potential.delta_strength) != 0:
        raise ValueError("the commutator formula needs a smooth potential")
    t_psi = -_laplacian(psi, h)
    t_psi[0] = t_psi[-1] = 0
    c_psi = -phi.second_derivative(h) * psi - 2 * phi.gradient * np.gradient(psi, h)
    kinetic = -2 * float(np.real(np.vdot(t_psi, c_psi))) * h
    grad_v = np.gradient(potential.at(t), h)
    pot = -2 * float(np.sum(psi0.density * phi.gradient * grad_v)) * h
    return CommutatorTerms(kinetic, pot)


def double_commutator_rhs(psi0: WaveField, phi: ObservableSpec, potential: PotentialSpec) -> float:
    return double_commutator_terms(psi0, phi, potential).total


@dataclass(frozen=True)
class RGLevel:
    h: float
    dt: float
    lhs: float
    rhs: float
    relative_error: float
    fd: FDResult

    def to_dict(self) -> dict:
        return {"h": self.h, "dt": self.dt, "lhs": self.lhs, "rhs": self.rhs,
                "relative_error": self.relative_error, "fd_order": self.fd.order}


@dataclass(frozen=True)
class RGReport:
    lhs: float
    rhs: float
    relative_error: float
    convergence_order: Optional[float]
    levels: tuple[RGLevel, ...] = ()
    orders: tuple[float, ...] = ()

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "relative_error": self.relative_error,
                "convergence_order": self.convergence_order, "orders": list(self.orders),
                "refinement": [lv.to_dict() for lv in self.levels]}


def relative_error(lhs: float, rhs: float, floor: float = 1e-12) -> float:
    return abs(lhs - rhs) / max(abs(lhs), abs(rhs), floor)


def second_derivative_level(psi0: WaveField, phi: ObservableSpec, potential: PotentialSpec, dt: float) -> RGLevel:
    """One ``(h, dt)`` level: propagate 12 steps, difference ``f`` and compare."""
    n_steps = 12
    traj = propagate(psi0, potential, n_steps * dt, dt, observables={phi.name: phi.values})
    fd = fd_time_derivative(traj.observables[phi.name], 2, dt)
    rhs = double_commutator_rhs(psi0, phi, potential)
    return RGLevel(psi0.grid.spacing, dt, fd.value, rhs, relative_error(fd.value, rhs), fd)


@dataclass(frozen=True)
class GaussianScenario:
    """Off-centre Gaussian state, confining ``x^2`` potential and ``x`` observable under a Gaussian envelope."""

    h: float = 0.025
    dt: float = 0.005
    half_width: float = 40.0
    x0: float = 0.5
    width: float = 1.0
    envelope: float = 3.0
    gauge: Optional[Callable[[float], float]] = field(default=None, compare=False)

    def grid(self, h: Optional[float] = None) -> Grid1D:
        return Grid1D.line(h or self.h, self.half_width)

    def build(self, h: Optional[float] = None):
        grid = self.grid(h)
        x = grid.x
        s2 = self.envelope**2
        env = np.exp(-x**2 / (2 * s2))
        psi0 = WaveField.from_function(grid, lambda y: np.exp(-((y - self.x0) / self.width) ** 2))
        phi = ObservableSpec.from_functions(
            "x_env", grid,
            lambda y: y * np.exp(-y**2 / (2 * s2)),
            lambda y: (1 - y**2 / s2) * np.exp(-y**2 / (2 * s2)),
            lambda y: (y**3 / s2**2 - 3 * y / s2) * np.exp(-y**2 / (2 * s2)),
        )
        profile = None
        if self.gauge is not None:
            gauge = self.gauge
            profile = lambda t: np.full(grid.n_points, gauge(t))  # noqa: E731
        potential = PotentialSpec(x**2 * env, profile=profile, label="x2_env")
        return psi0, phi, potential


def rg_second_derivative_check(
    scenario: GaussianScenario = GaussianScenario(),
    levels: int = 3,
    tol: float = 1e-3,
    order_range: tuple[float, float] = (1.5, 2.5),
    strict: bool = False,
) -> RGReport:
    """Compare ``f''(0)`` from the simulation with the commutator formula under ``(h, dt)`` halving."""
    out = []
    for j in range(levels):
        h = scenario.h / 2**j
        psi0, phi, pot = scenario.build(h)
        out.append(second_derivative_level(psi0, phi, pot, scenario.dt / 2**j))
    errs = [lv.relative_error for lv in out]
    orders = tuple(float(np.log2(a / b)) for a, b in zip(errs[:-1], errs[1:]) if a > 0 and b > 0)
    order = orders[-1] if orders else None
    first = out[0]
    if strict:
        if errs[-1] > tol and (order is None or not order_range[0] <= order <= order_range[1]):
            raise IdentityViolationError(f"refined error {errs[-1]:.2e} with order {order}")
    return RGReport(first.lhs, first.rhs, first.relative_error, order, tuple(out), orders)


# -- identification of potentials at order zero ------------------------------------

def gradient_functional(rho0: np.ndarray, v_diff: np.ndarray, h: float) -> tuple[float, float]:
    """``(int rho0 |grad v|^2, -2 int rho0 grad(phi).grad(v))`` with ``phi = v``."""
    g = np.gradient(np.asarray(v_diff, float), h)
    functional = float(np.sum(rho0 * g * g) * h)
    cross = float(-2 * np.sum(rho0 * g * g) * h)
    return functional, cross


def cross_form(rho0: np.ndarray, phi: np.ndarray, v_diff: np.ndarray, h: float) -> float:
    """``-2 int rho0 grad(phi).grad(v)`` computed from independent gradients."""
    return float(-2 * np.sum(rho0 * np.gradient(phi, h) * np.gradient(v_diff, h)) * h)


def support_components(rho0: np.ndarray, x: np.ndarray, floor: float = RHO_FLOOR) -> list[tuple[float, float]]:
    """Connected intervals of ``{rho0 > floor}``."""
    mask = rho0 > floor
    comps = []
    start = None
    for i, m in enumerate(mask):
        if m and start is None:
            start = i
        if not m and start is not None:
            comps.append((float(x[start]), float(x[i - 1])))
            start = None
    if start is not None:
        comps.append((float(x[start]), float(x[-1])))
    return comps


@dataclass(frozen=True)
class IdentificationResult:
    verdict: Verdict
    functional: float
    cross_form: float
    density_gap: float
    scale: float
    off_support_gradient: float
    support: tuple[tuple[float, float], ...]
    note: str = ""

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "functional": self.functional, "cross_form": self.cross_form,
                "density_gap": self.density_gap, "scale": self.scale,
                "off_support_gradient": self.off_support_gradient,
                "support": [list(s) for s in self.support], "note": self.note}


def identify_order0(
    psi0: WaveField,
    v1: PotentialSpec,
    v2: PotentialSpec,
    t_end: float = 0.5,
    dt: float = 0.01,
    density_tol: float = DENSITY_TOL,
    identification_tol: float = IDENTIFICATION_TOL,
    rho_floor: float = RHO_FLOOR,
) -> IdentificationResult:
    """Propagate under both potentials and classify them at ``t = 0``."""
    grid = psi0.grid
    h = grid.spacing
    t1 = propagate(psi0, v1, t_end, dt)
    t2 = propagate(psi0, v2, t_end, dt)
    rho0 = psi0.density
    gap = float(np.max(np.abs(t1.densities - t2.densities)))
    rel_gap = gap / float(np.max(rho0))
    a, b = v1.at(0.0), v2.at(0.0)
    diff = a - b
    functional, cross = gradient_functional(rho0, diff, h)
    scale = max(float(np.sum(rho0 * (np.gradient(a, h) ** 2 + np.gradient(b, h) ** 2)) * h), 1e-12)
    grad = np.abs(np.gradient(diff, h))
    off = rho0 <= rho_floor
    off_grad = float(np.max(grad[off], initial=0.0))
    on_grad = float(np.max(grad[~off], initial=0.0))
    grad_tol = identification_tol * max(float(np.max(np.abs(np.gradient(a, h)))),
                                         float(np.max(np.abs(np.gradient(b, h)))), 1e-12)
    functional_zero = functional / scale < identification_tol
    support = tuple(support_components(rho0, grid.x, rho_floor))

    note = ""
    if rel_gap < density_tol:
        if functional_zero and off_grad <= grad_tol:
            verdict: Verdict = "equal"
        else:
            verdict = "inconclusive"
            if functional_zero:
                note = "potentials differ only where the initial density vanishes"
            else:
                note = "functional nonzero but densities agree within tolerance"
    else:
        if not functional_zero:
            verdict = "distinguished"
        else:
            verdict = "inconclusive"
            note = "densities differ but the order-0 functional vanishes on the support"
    if verdict == "equal" and on_grad > grad_tol:
        verdict, note = "inconclusive", "gradient difference on the support below functional tolerance"
    return IdentificationResult(verdict, functional, cross, gap, scale, off_grad, support, note)


def scenario_potentials(grid: Grid1D, name: str) -> tuple[WaveField, PotentialSpec, PotentialSpec]:
    """The three canonical identification scenarios: gauge, bump-on-support, off-support."""
    x = grid.x
    psi0 = WaveField.from_function(grid, lambda y: np.exp(-((y - 0.5) ** 2)))
    base = x**2 * np.exp(-x**2 / 18)
    v1 = PotentialSpec(base, label="base")
    if name == "gauge":
        v2 = PotentialSpec(base + 5.0, label="base+5")
    elif name == "bump-on-support":
        v2 = PotentialSpec(base + x * np.exp(-x**2 / 2), label="base+x*bump")
    elif name == "off-support":
        bump = np.where(np.abs(x - 17.5) < 2.5, np.cos(np.pi * (x - 17.5) / 5) ** 4, 0.0)
        v2 = PotentialSpec(base + bump, label="base+far bump")
    else:
        raise ValueError(f"unknown scenario {name!r}")
    return psi0, v1, v2


def with_gauge(spec: PotentialSpec, c: Callable[[float], float], n: int) -> PotentialSpec:
    """``V + c(t)`` as a new spec (composes with any existing profile)."""
    prev = spec.profile

    def profile(t, prev=prev):
        base = np.zeros(n) if prev is None else np.asarray(prev(t), float)
        return base + c(t)

    return replace(spec, profile=profile, label=spec.label + "+c(t)")


def verdict_sequence(results: Sequence[IdentificationResult]) -> list[str]:
    return [r.verdict for r in results]
