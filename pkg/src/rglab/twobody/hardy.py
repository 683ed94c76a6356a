"""Weighted inequality ``int |f|^2/|y|^4 <= 4 int sum_kl |d_k d_l f|^2`` for odd ``f`` in 3D.

Test functions are odd polynomials of degree ``<= 3`` times ``e^{-|y|^2}``, so
both integrands are explicit and the Hessian is exact. Integrals use a
spherical tensor rule: dyadic radial shells towards the origin with
Gauss-Legendre nodes in each shell, times the product sphere rule.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from typing import Mapping, Optional

import numpy as np

from .sphere import SphereQuadrature

Exponent = tuple[int, int, int]


class QuadratureResolutionError(RuntimeError):
    """The integrals change under rule coarsening by more than the tolerance."""


def odd_monomials(max_degree: int = 3) -> list[Exponent]:
    out = []
    for deg in range(1, max_degree + 1, 2):
        for combo in combinations_with_replacement(range(3), deg):
            e = [0, 0, 0]
            for i in combo:
                e[i] += 1
            out.append(tuple(e))
    return out


@dataclass(frozen=True)
class Polynomial3:
    coeffs: Mapping[Exponent, float]

    def __call__(self, y: np.ndarray) -> np.ndarray:
        out = np.zeros(y.shape[:-1])
        for (a, b, c), k in self.coeffs.items():
            out = out + k * y[..., 0] ** a * y[..., 1] ** b * y[..., 2] ** c
        return out

    def d(self, i: int) -> "Polynomial3":
        new: dict[Exponent, float] = {}
        for e, k in self.coeffs.items():
            if e[i]:
                f = list(e)
                f[i] -= 1
                new[tuple(f)] = new.get(tuple(f), 0.0) + k * e[i]
        return Polynomial3(new)

    @property
    def is_odd(self) -> bool:
        return all(sum(e) % 2 == 1 for e, k in self.coeffs.items() if k != 0)


@dataclass(frozen=True)
class GaussianOddFunction:
    """``f(y) = P(y) e^{-|y|^2}`` with ``P`` odd."""

    poly: Polynomial3

    def __post_init__(self):
        if not self.poly.is_odd:
            raise ValueError("the polynomial factor must be odd")

    def value(self, y: np.ndarray) -> np.ndarray:
        return self.poly(y) * np.exp(-np.sum(y * y, axis=-1))

    def hessian(self, y: np.ndarray) -> np.ndarray:
        """Exact ``d_k d_l f`` stacked on the last two axes."""
        g = np.exp(-np.sum(y * y, axis=-1))
        p = self.poly(y)
        dp = [self.poly.d(i) for i in range(3)]
        dpv = [q(y) for q in dp]
        out = np.empty(y.shape[:-1] + (3, 3))
        for k in range(3):
            for l in range(k, 3):
                val = (dp[k].d(l)(y) - 2 * y[..., l] * dpv[k] - 2 * y[..., k] * dpv[l]
                       + p * (4 * y[..., k] * y[..., l] - 2 * (k == l)))
                out[..., k, l] = out[..., l, k] = val * g
        return out


@dataclass(frozen=True)
class RadialRule:
    nodes: np.ndarray
    weights: np.ndarray

    @classmethod
    def dyadic(cls, r_max: float = 6.0, shells: int = 10, per_shell: int = 16) -> "RadialRule":
        """``shells`` dyadic shells ``[r_max 2^-(s+1), r_max 2^-s]`` plus the inner ball, GL in each."""
        edges = [0.0] + [r_max * 2.0 ** (-s) for s in range(shells, -1, -1)]
        x, w = np.polynomial.legendre.leggauss(per_shell)
        nodes, weights = [], []
        for a, b in zip(edges[:-1], edges[1:]):
            nodes.append(0.5 * (b - a) * x + 0.5 * (a + b))
            weights.append(0.5 * (b - a) * w)
        return cls(np.concatenate(nodes), np.concatenate(weights))


def _integrate(fn, radial: RadialRule, sphere: SphereQuadrature) -> float:
    pts = radial.nodes[:, None, None] * sphere.nodes[None, :, :]
    vals = fn(pts)
    return float(np.einsum("r,s,rs->", radial.weights * radial.nodes**2, sphere.weights, vals))


def _sides(f: GaussianOddFunction, radial: RadialRule, sphere: SphereQuadrature) -> tuple[float, float]:
    def weighted(y):
        r2 = np.sum(y * y, axis=-1)
        return f.value(y) ** 2 / r2**2

    def hess_sq(y):
        return np.sum(f.hessian(y) ** 2, axis=(-2, -1))

    return _integrate(weighted, radial, sphere), _integrate(hess_sq, radial, sphere)


@dataclass(frozen=True)
class HardyResult:
    lhs: float
    rhs: float
    holds: bool
    margin: float
    resolution: float

    def to_dict(self) -> dict:
        return {"lhs": self.lhs, "rhs": self.rhs, "four_rhs": 4 * self.rhs, "holds": self.holds,
                "margin": self.margin, "resolution": self.resolution}


def hardy_chain_verify(
    f: GaussianOddFunction,
    radial: Optional[RadialRule] = None,
    sphere: Optional[SphereQuadrature] = None,
    resolution_tol: float = 1e-8,
) -> HardyResult:
    """Both sides by quadrature, with a coarser rule as a resolution check.

    ``margin`` is ``4 rhs - lhs`` (non-negative when the inequality holds).
    """
    radial = radial or RadialRule.dyadic()
    sphere = sphere or SphereQuadrature.product(8)
    lhs, rhs = _sides(f, radial, sphere)
    lhs_c, rhs_c = _sides(f, RadialRule.dyadic(per_shell=12), SphereQuadrature.product(7))
    scale = max(abs(lhs), abs(rhs), 1e-300)
    resolution = max(abs(lhs - lhs_c), abs(rhs - rhs_c)) / scale
    if lhs == 0 and rhs == 0:
        resolution = 0.0
    if resolution > resolution_tol:
        raise QuadratureResolutionError(f"relative change {resolution:.2e} under coarsening")
    return HardyResult(lhs, rhs, lhs <= 4 * rhs, 4 * rhs - lhs, resolution)


def random_odd_function(rng: np.random.Generator, max_degree: int = 3) -> GaussianOddFunction:
    coeffs = {e: float(rng.normal()) for e in odd_monomials(max_degree)}
    return GaussianOddFunction(Polynomial3(coeffs))


def y1_gaussian() -> GaussianOddFunction:
    return GaussianOddFunction(Polynomial3({(1, 0, 0): 1.0}))
