"""Boundary jets, model Hamiltonians and operator-domain membership.

Two operators are supported:

* ``DeltaHamiltonian(lam)``: ``-d^2/dx^2 + lam*delta(x)`` on the line. A
  function is in its domain when both pieces of ``f''`` are square integrable,
  ``f(0-) = f(0+)`` and ``f'(0+) - f'(0-) = lam * f(0)``.
* ``RadialHamiltonian()``: ``-d^2/dr^2 - 1/r`` on the half-line with the
  Dirichlet condition ``f(0) = 0``.

``apply`` never raises on a domain violation; it returns the formal image
together with a report so callers can inspect what went wrong.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial
from typing import Literal, Optional, Union

from .expoly import (
    AnyFunction,
    DivergentIntegralError,
    HalfLineFunction,
    LineFunction,
    Number,
    SingularTermError,
)

Condition = Literal["continuity", "jump", "integrability", "singular-term", "dirichlet"]
SideTag = Literal["0+", "0-"]


@dataclass(frozen=True)
class Jet:
    """One-sided derivative values ``f^(j)(0+/-)`` for ``j = 0..order``."""

    base_point_side: SideTag
    coefficients: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, j: int) -> Fraction:
        return self.coefficients[j]


@dataclass(frozen=True)
class DomainReport:
    """Largest verified power ``k`` with ``f in D(h^k)`` and the first failure, if any.

    ``first_violation`` is ``(j, condition)`` meaning ``h^j f`` is not in ``D(h)``.
    """

    max_order: int
    requested: int
    first_violation: Optional[tuple[int, Condition]] = None
    detail: str = field(default="", compare=False)

    def __post_init__(self):
        if self.max_order < 0:
            raise ValueError("max_order must be non-negative")
        if (self.first_violation is None) != (self.max_order >= self.requested):
            raise ValueError("first_violation must be present iff max_order < requested")

    @property
    def in_domain(self) -> bool:
        return self.first_violation is None

    def to_dict(self) -> dict:
        return {
            "max_order": self.max_order,
            "requested": self.requested,
            "first_violation": None if self.first_violation is None
            else {"order": self.first_violation[0], "condition": self.first_violation[1]},
        }


def _piece(f: AnyFunction, side: SideTag) -> HalfLineFunction:
    if isinstance(f, HalfLineFunction):
        expected = "right" if side == "0+" else "left"
        if f.side != expected:
            raise ValueError(f"function lives on the {f.side} half-line, jet requested at {side}")
        return f
    return f.right if side == "0+" else f.left


def boundary_jet(f: AnyFunction, side: SideTag, order: int) -> Jet:
    """Exact one-sided derivatives at the origin up to ``order``.

    Raises ``SingularTermError`` when the requested piece (or one of its
    derivatives up to ``order``) has a pole at the origin.
    """
    if order < 0:
        raise ValueError("order must be >= 0")
    g = _piece(f, side)
    values = []
    for _ in range(order + 1):
        values.append(g.value_at_zero())
        g = g.derivative()
    return Jet(side, tuple(values))


# -- operators ---------------------------------------------------------------

@dataclass(frozen=True)
class DeltaHamiltonian:
    lam: Fraction

    def __init__(self, lam: Number):
        object.__setattr__(self, "lam", Fraction(lam))

    name = "delta"

    def apply(self, f: LineFunction) -> tuple[LineFunction, DomainReport]:
        return apply_delta_hamiltonian(f, self.lam)


@dataclass(frozen=True)
class RadialHamiltonian:
    name = "radial"

    def apply(self, f: HalfLineFunction) -> tuple[HalfLineFunction, DomainReport]:
        return apply_radial_hamiltonian(f)


Operator = Union[DeltaHamiltonian, RadialHamiltonian]


def _fail(cond: Condition, detail: str) -> DomainReport:
    return DomainReport(0, 1, (0, cond), detail)


_OK = DomainReport(1, 1)


def apply_delta_hamiltonian(f: LineFunction, lam: Number) -> tuple[LineFunction, DomainReport]:
    """Formal ``-f''`` on each half-line plus a membership report for ``D(h)``."""
    lam = Fraction(lam)
    second = LineFunction(f.left.derivative().derivative(), f.right.derivative().derivative())
    image = -second
    if not f.square_integrable:
        return image, _fail("integrability", "f is not square integrable")
    if not second.square_integrable:
        return image, _fail("integrability", "f'' is not square integrable")
    try:
        jl = boundary_jet(f, "0-", 1)
        jr = boundary_jet(f, "0+", 1)
    except SingularTermError as exc:
        return image, _fail("singular-term", str(exc))
    if jl[0] != jr[0]:
        return image, _fail("continuity", f"f(0-)={jl[0]} != f(0+)={jr[0]}")
    jump = jr[1] - jl[1]
    if jump != lam * jr[0]:
        return image, _fail("jump", f"f'(0+)-f'(0-)={jump} != {lam}*f(0)={lam * jr[0]}")
    return image, _OK


def apply_radial_hamiltonian(f: HalfLineFunction) -> tuple[HalfLineFunction, DomainReport]:
    """Formal ``-f'' - f/r`` plus a membership report for ``D(h0)``."""
    if f.side != "right":
        raise ValueError("the radial operator acts on right half-line functions")
    image = -(f.derivative().derivative()) - f.shift_power(-1)
    if not f.decays_at_infinity:
        return image, _fail("integrability", "f does not decay at infinity")
    if not f.is_regular_at_origin:
        return image, _fail("singular-term", f"f has principal part {f.principal_part()}")
    if f.value_at_zero() != 0:
        return image, _fail("dirichlet", f"f(0)={f.value_at_zero()} != 0")
    if not image.is_regular_at_origin:
        return image, _fail("singular-term", f"h0 f has principal part {image.principal_part()}")
    return image, _OK


def domain_order(f: AnyFunction, operator: Operator, k_max: int) -> DomainReport:
    """Largest ``k <= k_max`` with ``f in D(h^k)``, and the first violated condition."""
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    g = f
    for j in range(k_max):
        g, rep = operator.apply(g)
        if not rep.in_domain:
            cond = rep.first_violation[1]
            return DomainReport(j, k_max, (j, cond), rep.detail)
    return DomainReport(k_max, k_max)


def iterate(f: AnyFunction, operator: Operator, k: int) -> AnyFunction:
    """``h^k f`` computed formally (no domain checks)."""
    for _ in range(k):
        f, _rep = operator.apply(f)
    return f


# -- inner products ------------------------------------------------------------

def _half_line_integral(h: HalfLineFunction) -> Fraction:
    if not h.is_regular_at_origin:
        raise DivergentIntegralError(f"non-integrable pole at the origin: {h.principal_part()}")
    total = Fraction(0)
    for t in h.terms:
        if t.power < 0:
            # regular overall, but the termwise integrals produce logarithms
            raise DivergentIntegralError("negative-power terms give a non-rational integral")
        if h.side == "right":
            if t.rate >= 0:
                raise DivergentIntegralError(f"combined rate {t.rate} >= 0 on (0, inf)")
            total += t.coeff * factorial(t.power) / (-t.rate) ** (t.power + 1)
        else:
            if t.rate <= 0:
                raise DivergentIntegralError(f"combined rate {t.rate} <= 0 on (-inf, 0)")
            total += t.coeff * (-1) ** t.power * factorial(t.power) / t.rate ** (t.power + 1)
    return total


def l2_inner(f: AnyFunction, g: AnyFunction) -> Fraction:
    """Exact ``integral f*g`` over the line (real-valued functions)."""
    if isinstance(f, HalfLineFunction):
        f = LineFunction(right=f) if f.side == "right" else LineFunction(left=f)
    if isinstance(g, HalfLineFunction):
        g = LineFunction(right=g) if g.side == "right" else LineFunction(left=g)
    return _half_line_integral(f.left * g.left) + _half_line_integral(f.right * g.right)


def l2_norm_squared(f: AnyFunction) -> Fraction:
    return l2_inner(f, f)
