"""Product quadrature on the unit sphere and analytic monomial moments."""

from __future__ import annotations

from dataclasses import dataclass
from math import gamma, pi

import numpy as np


class RuleDegreeError(ValueError):
    """The rule is not exact to the degree the computation needs."""


@dataclass(frozen=True)
class SphereQuadrature:
    """Nodes on the unit sphere with weights summing to ``4*pi``.

    ``degree`` is the largest total polynomial degree integrated exactly.
    """

    nodes: np.ndarray
    weights: np.ndarray
    degree: int

    @classmethod
    def product(cls, n_theta: int = 8, n_phi: int | None = None) -> "SphereQuadrature":
        """Gauss-Legendre in ``cos(theta)`` times the uniform rule in azimuth."""
        if n_phi is None:
            n_phi = 2 * n_theta
        z, wz = np.polynomial.legendre.leggauss(n_theta)
        phi = 2 * np.pi * np.arange(n_phi) / n_phi
        zz, pp = np.meshgrid(z, phi, indexing="ij")
        s = np.sqrt(1 - zz**2)
        nodes = np.stack([s * np.cos(pp), s * np.sin(pp), zz], axis=-1).reshape(-1, 3)
        weights = np.repeat(wz, n_phi) * (2 * np.pi / n_phi)
        return cls(nodes, weights, min(2 * n_theta - 1, n_phi - 1))

    def mean(self, values: np.ndarray) -> np.ndarray:
        """``(1/4pi) * integral`` of node values (leading axis = nodes)."""
        return np.tensordot(self.weights, values, axes=(0, 0)) / (4 * np.pi)


def monomial_moment(a: int, b: int, c: int) -> float:
    """Exact ``(1/4pi) int w1^a w2^b w3^c dw`` over the unit sphere."""
    if a % 2 or b % 2 or c % 2:
        return 0.0
    al, be, ga = (a + 1) / 2, (b + 1) / 2, (c + 1) / 2
    return 2 * gamma(al) * gamma(be) * gamma(ga) / gamma(al + be + ga) / (4 * pi)


def sphere_second_moment(quad: SphereQuadrature, tol: float = 1e-12) -> np.ndarray:
    """``(1/4pi) int w_i w_j dw`` by quadrature; checked against ``delta_ij / 3``."""
    if quad.degree < 2:
        raise RuleDegreeError(f"second moments need degree >= 2, rule has {quad.degree}")
    w = quad.nodes
    moment = quad.mean(w[:, :, None] * w[:, None, :])
    dev = float(np.max(np.abs(moment - np.eye(3) / 3)))
    if dev > tol:
        raise RuleDegreeError(f"second moment deviates from delta/3 by {dev:.2e}")
    return moment


def moment_errors(quad: SphereQuadrature, max_degree: int) -> float:
    """Largest error over all monomials of total degree ``<= max_degree``."""
    w = quad.nodes
    worst = 0.0
    for a in range(max_degree + 1):
        for b in range(max_degree + 1 - a):
            for c in range(max_degree + 1 - a - b):
                approx = float(quad.mean(w[:, 0] ** a * w[:, 1] ** b * w[:, 2] ** c))
                worst = max(worst, abs(approx - monomial_moment(a, b, c)))
    return worst
