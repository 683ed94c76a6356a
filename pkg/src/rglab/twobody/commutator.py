"""Double commutator of the interaction with the one-body kinetic/potential commutators.

For ``w(X) = 1/|x_l - x_k|`` and a one-body potential ``V`` the operator
``sum_j [w, [-Lap_j, V(x_j)]]`` is multiplication by

    2 sum_j grad V(x_j) . grad_j w = -2 (x_l - x_k)/|x_l - x_k|^3 . (grad V(x_l) - grad V(x_k)).

``reference_multiplier`` is the bare expression
``(x_l - x_k)/|x_l - x_k|^3 . (grad V(x_l) - grad V(x_k))``; the operator
equals ``-2`` times it. The finite-difference evaluation below applies the
operator to a test function and recovers both facts numerically.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .potentials import Potential3D


def reference_multiplier(xl, xk, potential: Potential3D) -> float:
    d = np.asarray(xl, float) - np.asarray(xk, float)
    return float(d @ (potential.grad(np.asarray(xl, float)) - potential.grad(np.asarray(xk, float)))
                 / np.linalg.norm(d) ** 3)


def exact_multiplier(xl, xk, potential: Potential3D) -> float:
    return -2.0 * reference_multiplier(xl, xk, potential)


def _laplacian_fd(fn: Callable[[np.ndarray], float], x: np.ndarray, block: slice, delta: float) -> float:
    """Fourth-order central Laplacian of ``fn`` in the coordinates ``x[block]``."""
    total = 0.0
    f0 = fn(x)
    for i in range(block.start, block.stop):
        e = np.zeros_like(x)
        e[i] = delta
        total += (-fn(x + 2 * e) + 16 * fn(x + e) - 30 * f0 + 16 * fn(x - e) - fn(x - 2 * e)) / (12 * delta**2)
    return total


def commutator_fd(X, potential: Potential3D, test_fn: Callable[[np.ndarray], float], delta: float = 1e-3) -> float:
    """``(sum_j [w, [-Lap_j, V_j]] g)(X) / g(X)`` by finite differences in six dimensions."""
    X = np.asarray(X, float)
    blocks = (slice(0, 3), slice(3, 6))

    def w(Y):
        return 1.0 / np.linalg.norm(Y[:3] - Y[3:])

    def wg(Y):
        return w(Y) * test_fn(Y)

    total = 0.0
    for b in blocks:
        def vj(Y, b=b):
            return float(potential.value(Y[b]))

        # [-Lap, V] h = -Lap(V h) + V Lap h
        def inner(h_fn, Y, vj=vj, b=b):
            return -_laplacian_fd(lambda Z: vj(Z) * h_fn(Z), Y, b, delta) + vj(Y) * _laplacian_fd(h_fn, Y, b, delta)

        total += w(X) * inner(test_fn, X) - inner(wg, X)
    return total / test_fn(X)


def default_test_function(Y: np.ndarray) -> float:
    return float(np.exp(-0.1 * Y @ Y) * (1.5 + np.sin(Y[0] - 0.3 * Y[4])))


@dataclass(frozen=True)
class CommutatorCheck:
    max_deviation: float
    max_relative_deviation: float
    ratios_to_reference: tuple[float, ...]
    n_points: int

    def to_dict(self) -> dict:
        return {"max_deviation": self.max_deviation, "max_relative_deviation": self.max_relative_deviation,
                "ratios_to_reference": list(self.ratios_to_reference), "n_points": self.n_points}


def interaction_commutator_identity(
    points, potential: Potential3D, test_fn=default_test_function, delta: float = 1e-3
) -> CommutatorCheck:
    """Compare the finite-difference commutator with ``-2 * reference_multiplier`` at each 6-tuple."""
    devs, rels, ratios = [], [], []
    for X in points:
        X = np.asarray(X, float)
        if np.linalg.norm(X[:3] - X[3:]) == 0:
            raise ValueError("coincident particle positions")
        fd = commutator_fd(X, potential, test_fn, delta)
        exact = exact_multiplier(X[:3], X[3:], potential)
        ref = reference_multiplier(X[:3], X[3:], potential)
        devs.append(abs(fd - exact))
        rels.append(abs(fd - exact) / max(abs(exact), 1e-12))
        if abs(ref) > 1e-9:
            ratios.append(fd / ref)
    return CommutatorCheck(max(devs), max(rels), tuple(ratios), len(devs))


def random_points(rng: np.random.Generator, n: int, min_separation: float = 0.5) -> np.ndarray:
    out = []
    while len(out) < n:
        X = rng.uniform(-1.5, 1.5, size=6)
        if np.linalg.norm(X[:3] - X[3:]) >= min_separation:
            out.append(X)
    return np.array(out)
