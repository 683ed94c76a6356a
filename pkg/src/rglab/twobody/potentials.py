"""Smooth 3D potentials with analytic gradients and Hessians."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

Array = np.ndarray


@dataclass(frozen=True)
class Potential3D:
    name: str
    value: Callable[[Array], Array]
    grad: Callable[[Array], Array]
    hess: Callable[[Array], Array]
    harmonic: bool = False

    def laplacian(self, x: Array) -> Array:
        return np.trace(self.hess(x), axis1=-2, axis2=-1)


def _stack(*cols):
    return np.stack(np.broadcast_arrays(*cols), axis=-1)


def _hess(rows):
    return np.stack([_stack(*r) for r in rows], axis=-2)


def constant(c: float = 1.0) -> Potential3D:
    return Potential3D("constant", lambda x: np.full(x.shape[:-1], c),
                       lambda x: np.zeros(x.shape), lambda x: np.zeros(x.shape + (3,)), True)


def linear(a=(1.0, -2.0, 0.5)) -> Potential3D:
    a = np.asarray(a, float)
    return Potential3D("linear", lambda x: x @ a, lambda x: np.broadcast_to(a, x.shape).copy(),
                       lambda x: np.zeros(x.shape + (3,)), True)


def quadratic_form(m, name: str) -> Potential3D:
    """``x^T M x`` for symmetric ``M``."""
    m = np.asarray(m, float)
    return Potential3D(name, lambda x: np.einsum("...i,ij,...j->...", x, m, x),
                       lambda x: 2 * x @ m, lambda x: np.broadcast_to(2 * m, x.shape + (3,)).copy(),
                       bool(abs(np.trace(m)) < 1e-15))


def x1() -> Potential3D:
    p = linear((1.0, 0.0, 0.0))
    return Potential3D("x1", p.value, p.grad, p.hess, True)


def x1x2() -> Potential3D:
    return quadratic_form([[0, 0.5, 0], [0.5, 0, 0], [0, 0, 0]], "x1*x2")


def x1sq_minus_x2sq() -> Potential3D:
    return quadratic_form(np.diag([1.0, -1.0, 0.0]), "x1^2-x2^2")


def norm_squared() -> Potential3D:
    return quadratic_form(np.eye(3), "|x|^2")


def cubic_harmonic() -> Potential3D:
    """``Re((x1 + i x2)^3) = x1^3 - 3 x1 x2^2``."""
    def value(x):
        return x[..., 0] ** 3 - 3 * x[..., 0] * x[..., 1] ** 2

    def grad(x):
        a, b = x[..., 0], x[..., 1]
        return _stack(3 * a**2 - 3 * b**2, -6 * a * b, 0 * a)

    def hess(x):
        a, b = x[..., 0], x[..., 1]
        z = 0 * a
        return _hess([(6 * a, -6 * b, z), (-6 * b, -6 * a, z), (z, z, z)])

    return Potential3D("Re((x1+ix2)^3)", value, grad, hess, True)


def quartic() -> Potential3D:
    """``|x|^4`` (Laplacian ``20 |x|^2``)."""
    def value(x):
        return np.sum(x * x, axis=-1) ** 2

    def grad(x):
        return 4 * np.sum(x * x, axis=-1)[..., None] * x

    def hess(x):
        r2 = np.sum(x * x, axis=-1)[..., None, None]
        return 4 * r2 * np.eye(3) + 8 * x[..., :, None] * x[..., None, :]

    return Potential3D("|x|^4", value, grad, hess, False)


def harmonic_battery() -> list[Potential3D]:
    return [x1(), x1x2(), x1sq_minus_x2sq(), cubic_harmonic()]
