"""Electron-electron cusp: Hessian of ``f(u) e^{|v|/4}`` and the small-sphere limit.

With ``W(u, v) = V(u + v/2) + V(u - v/2)`` and ``psi = f(u) e^{|v|/4}`` the
quantity

    L(r) = (r / 4pi) int_{|v|=r} [4 tr(Hess_v W Hess_v psi) - grad_v W . v/|v|^3 psi] dw

has a finite limit as ``r -> 0`` proportional to ``f(u) Lap V(u)``. For
``V = |x|^2`` one gets ``L(r) = f e^{r/4} (1 + r/4)`` exactly, so the limit is
``f`` and the ratio to ``f Lap V`` is ``1/6``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .potentials import Potential3D
from .sphere import RuleDegreeError, SphereQuadrature


class CuspSingularityError(ValueError):
    """Evaluation requested at (or outside the validity region around) the coalescence point."""


class DegenerateLimitError(ValueError):
    """The normalising factor ``f(u) Lap V(u)`` vanishes."""


def _check_v(v) -> tuple[np.ndarray, float]:
    v = np.asarray(v, float)
    r = float(np.linalg.norm(v))
    if r == 0:
        raise CuspSingularityError("the Hessian is singular at v = 0")
    if r >= 1:
        raise CuspSingularityError("the cusp factor is only used for |v| < 1")
    return v, r


def hessian_cusp(v, f_value: float) -> np.ndarray:
    """Closed-form Hessian of ``f e^{|v|/4}`` in ``v``."""
    v, r = _check_v(v)
    vv = np.outer(v, v)
    return f_value * np.exp(r / 4) * (vv / (16 * r**2) - vv / (4 * r**3) + np.eye(3) / (4 * r))


def cusp_value(v, f_value: float) -> float:
    return f_value * float(np.exp(np.linalg.norm(v) / 4))


def hessian_fd(fn, v, delta: float = 1e-3) -> np.ndarray:
    """Fourth-order Hessian: Richardson on second-order central differences at ``delta``, ``2 delta``."""
    v = np.asarray(v, float)
    eye = np.eye(3)

    def second_order(d):
        out = np.empty((3, 3))
        f0 = fn(v)
        for i in range(3):
            out[i, i] = (fn(v + d * eye[i]) - 2 * f0 + fn(v - d * eye[i])) / d**2
            for j in range(i + 1, 3):
                out[i, j] = out[j, i] = (
                    fn(v + d * eye[i] + d * eye[j]) - fn(v + d * eye[i] - d * eye[j])
                    - fn(v - d * eye[i] + d * eye[j]) + fn(v - d * eye[i] - d * eye[j])
                ) / (4 * d**2)
        return out

    return (4 * second_order(delta) - second_order(2 * delta)) / 3


def hessian_fd_deviation(v, f_value: float = 1.0, delta: Optional[float] = None) -> float:
    """Max relative deviation between the closed form and finite differences.

    The default step is ``2e-3 |v|`` so the stencil stays clear of the cusp.
    """
    if delta is None:
        delta = 2e-3 * float(np.linalg.norm(v))
    exact = hessian_cusp(v, f_value)
    approx = hessian_fd(lambda w: cusp_value(w, f_value), v, delta)
    return float(np.max(np.abs(exact - approx)) / max(np.max(np.abs(exact)), 1e-300))


# -- the small-sphere limit ----------------------------------------------------------

def bracket_mean(potential: Potential3D, f_value: float, u, r: float, quad: SphereQuadrature) -> float:
    """``L(r)``: ``r`` times the spherical mean of the bracketed integrand at radius ``r``."""
    u = np.asarray(u, float)
    w = quad.nodes
    v = r * w
    hess_w = 0.25 * (potential.hess(u + v / 2) + potential.hess(u - v / 2))
    grad_w = 0.5 * (potential.grad(u + v / 2) - potential.grad(u - v / 2))
    psi = f_value * np.exp(r / 4)
    vv = w[:, :, None] * w[:, None, :]
    hess_psi = psi * (vv / 16 - vv / (4 * r) + np.eye(3) / (4 * r))
    first = 4 * np.einsum("nij,nji->n", hess_w, hess_psi)
    second = np.einsum("ni,ni->n", grad_w, w) / r**2 * psi
    return r * float(quad.mean(first - second))


@dataclass(frozen=True)
class LimitEstimate:
    radii: tuple[float, ...]
    values: tuple[float, ...]
    limit: float
    first_level: tuple[float, ...]
    uncertainty: float
    observed_order: Optional[float]
    normaliser: float
    kappa: Optional[float]
    kappa_uncertainty: Optional[float]

    def to_dict(self) -> dict:
        return {
            "radii": list(self.radii), "values": list(self.values), "limit": self.limit,
            "richardson_first_level": list(self.first_level), "uncertainty": self.uncertainty,
            "observed_order": self.observed_order, "f_lap_v": self.normaliser,
            "kappa": self.kappa, "kappa_uncertainty": self.kappa_uncertainty,
        }


def singular_limit_estimate(
    potential: Potential3D,
    f_value: float = 1.0,
    u=(0.3, -0.2, 0.1),
    radii: Sequence[float] = (0.2, 0.1, 0.05),
    quad: Optional[SphereQuadrature] = None,
) -> LimitEstimate:
    """Extrapolate ``L(r)`` to ``r = 0`` from radii ``r, r/2, r/4``.

    The first Richardson level assumes an ``O(r)`` error; a second level
    removes an assumed ``O(r^2)`` term and the spread between the two levels is
    reported as the uncertainty. ``kappa = limit / (f Lap V(u))`` is only
    formed when ``Lap V(u) != 0``.
    """
    if abs(f_value) < 1e-12:
        raise DegenerateLimitError("f(u) = 0: the limit carries no information")
    radii = tuple(float(r) for r in radii)
    if len(radii) != 3 or not all(0 < r < 1 for r in radii) or not radii[0] > radii[1] > radii[2]:
        raise ValueError("need three decreasing radii in (0, 1)")
    if not np.allclose([radii[0] / radii[1], radii[1] / radii[2]], 2.0):
        raise ValueError("radii must halve: r, r/2, r/4")
    quad = quad or SphereQuadrature.product()
    if quad.degree < 4:
        raise RuleDegreeError("the bracket needs a rule exact to degree >= 4")
    vals = tuple(bracket_mean(potential, f_value, u, r, quad) for r in radii)
    l0, l1, l2 = vals
    first = (2 * l1 - l0, 2 * l2 - l1)
    limit = (4 * first[1] - first[0]) / 3
    uncertainty = abs(limit - first[1])
    d0, d1 = abs(l0 - l1), abs(l1 - l2)
    order = float(np.log2(d0 / d1)) if d0 > 1e-14 and d1 > 1e-14 else None
    lap = float(potential.laplacian(np.asarray(u, float)))
    normaliser = f_value * lap
    if abs(normaliser) < 1e-12:
        kappa = kappa_unc = None
    else:
        kappa, kappa_unc = limit / normaliser, uncertainty / abs(normaliser)
    return LimitEstimate(radii, vals, limit, first, uncertainty, order, normaliser, kappa, kappa_unc)
