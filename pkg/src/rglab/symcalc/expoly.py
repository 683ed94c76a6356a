"""Exact exp-polynomial functions on the half-lines and on the line.

A half-line function is a finite sum of terms ``c * x**n * exp(a*x)`` with
rational ``c`` and ``a`` and integer ``n``, living either on ``x > 0``
(``side="right"``) or on ``x < 0`` (``side="left"``). The coordinate is the
signed one, so ``exp(-|x|)`` is ``exp(x)`` on the left piece.

Negative powers arise from dividing by ``r`` in the radial hydrogen operator.
Individual terms may carry them while the function is still regular at the
origin: ``(exp(-r/2) - exp(-r/4)) / r`` is bounded. Regularity is therefore
decided on the Laurent expansion of the whole sum, never term by term.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Iterable, Literal, Mapping, Union

Side = Literal["left", "right"]
Number = Union[int, Fraction]


class SingularTermError(ValueError):
    """The function has a nonzero principal part (a ``1/x``-type pole) at 0."""


class DivergentIntegralError(ValueError):
    """An integral requested from ``l2_inner`` does not converge (or is not rational)."""


@dataclass(frozen=True, order=True)
class ExpPolyTerm:
    """One term ``coeff * x**power * exp(rate * x)``."""

    rate: Fraction
    power: int
    coeff: Fraction

    def __repr__(self) -> str:
        return f"{self.coeff}*x^{self.power}*e^({self.rate}x)"


def _normalize(items: Iterable[tuple[Number, int, Number]]) -> tuple[ExpPolyTerm, ...]:
    acc: dict[tuple[Fraction, int], Fraction] = {}
    for coeff, power, rate in items:
        coeff = Fraction(coeff)
        if coeff == 0:
            continue
        key = (Fraction(rate), int(power))
        acc[key] = acc.get(key, Fraction(0)) + coeff
    return tuple(sorted(ExpPolyTerm(r, n, c) for (r, n), c in acc.items() if c != 0))


@dataclass(frozen=True)
class HalfLineFunction:
    """Normalized exp-polynomial on one open half-line."""

    terms: tuple[ExpPolyTerm, ...] = ()
    side: Side = "right"

    def __post_init__(self):
        if self.side not in ("left", "right"):
            raise ValueError(f"side must be 'left' or 'right', got {self.side!r}")

    @classmethod
    def build(cls, items: Iterable[tuple[Number, int, Number]], side: Side = "right") -> "HalfLineFunction":
        """Construct from ``(coeff, power, rate)`` triples, merging duplicates."""
        return cls(_normalize(items), side)

    @classmethod
    def zero(cls, side: Side = "right") -> "HalfLineFunction":
        return cls((), side)

    @classmethod
    def constant(cls, c: Number, side: Side = "right") -> "HalfLineFunction":
        return cls.build([(c, 0, 0)], side)

    # -- algebra -----------------------------------------------------------
    def _triples(self):
        return ((t.coeff, t.power, t.rate) for t in self.terms)

    def _check_side(self, other: "HalfLineFunction") -> None:
        if other.side != self.side:
            raise ValueError("cannot combine functions living on different half-lines")

    def __add__(self, other: "HalfLineFunction") -> "HalfLineFunction":
        self._check_side(other)
        return HalfLineFunction.build([*self._triples(), *other._triples()], self.side)

    def __neg__(self) -> "HalfLineFunction":
        return self.scale(-1)

    def __sub__(self, other: "HalfLineFunction") -> "HalfLineFunction":
        return self + (-other)

    def scale(self, c: Number) -> "HalfLineFunction":
        c = Fraction(c)
        return HalfLineFunction.build(((c * k, n, a) for k, n, a in self._triples()), self.side)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_side(other)
        return HalfLineFunction.build(
            ((c1 * c2, n1 + n2, a1 + a2)
             for c1, n1, a1 in self._triples()
             for c2, n2, a2 in other._triples()),
            self.side,
        )

    __rmul__ = __mul__

    def derivative(self) -> "HalfLineFunction":
        out = []
        for c, n, a in self._triples():
            if n != 0:
                out.append((c * n, n - 1, a))
            if a != 0:
                out.append((c * a, n, a))
        return HalfLineFunction.build(out, self.side)

    def shift_power(self, k: int) -> "HalfLineFunction":
        """Multiply by ``x**k`` (``k=-1`` is division by ``x``)."""
        return HalfLineFunction.build(((c, n + k, a) for c, n, a in self._triples()), self.side)

    # -- local analysis at the origin ---------------------------------------
    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def min_power(self) -> int:
        return min((t.power for t in self.terms), default=0)

    def laurent_coefficient(self, q: int) -> Fraction:
        """Coefficient of ``x**q`` in the Laurent expansion at the origin."""
        total = Fraction(0)
        for c, n, a in self._triples():
            if n <= q:
                total += c * a ** (q - n) / factorial(q - n)
        return total

    def principal_part(self) -> dict[int, Fraction]:
        """Nonzero Laurent coefficients with negative index."""
        out = {}
        for q in range(self.min_power, 0):
            coeff = self.laurent_coefficient(q)
            if coeff != 0:
                out[q] = coeff
        return out

    @property
    def is_regular_at_origin(self) -> bool:
        return not self.principal_part()

    def value_at_zero(self) -> Fraction:
        """One-sided limit at the origin; raises if the function has a pole there."""
        pp = self.principal_part()
        if pp:
            raise SingularTermError(f"principal part {pp} at the origin")
        return self.laurent_coefficient(0)

    # -- behaviour at infinity ----------------------------------------------
    @property
    def decays_at_infinity(self) -> bool:
        """True when every term decays exponentially away from the origin."""
        if self.side == "right":
            return all(t.rate < 0 for t in self.terms)
        return all(t.rate > 0 for t in self.terms)

    @property
    def square_integrable(self) -> bool:
        return self.decays_at_infinity and self.is_regular_at_origin

    def __call__(self, x: float) -> float:
        from math import exp
        return float(sum(float(t.coeff) * x ** t.power * exp(float(t.rate) * x) for t in self.terms))

    def __repr__(self) -> str:
        body = " + ".join(map(repr, self.terms)) or "0"
        return f"HalfLineFunction[{self.side}]({body})"


@dataclass(frozen=True)
class LineFunction:
    """Piecewise exp-polynomial on the real line, split at the origin."""

    left: HalfLineFunction = HalfLineFunction((), "left")
    right: HalfLineFunction = HalfLineFunction((), "right")

    def __post_init__(self):
        if self.left.side != "left" or self.right.side != "right":
            raise ValueError("pieces must be tagged left/right respectively")

    @classmethod
    def build(cls, left: Iterable[tuple[Number, int, Number]], right: Iterable[tuple[Number, int, Number]]) -> "LineFunction":
        return cls(HalfLineFunction.build(left, "left"), HalfLineFunction.build(right, "right"))

    @classmethod
    def constant(cls, c: Number) -> "LineFunction":
        return cls.build([(c, 0, 0)], [(c, 0, 0)])

    @classmethod
    def exp_abs(cls, rate: Number, coeff: Number = 1) -> "LineFunction":
        """``coeff * exp(rate * |x|)``."""
        rate = Fraction(rate)
        return cls.build([(coeff, 0, -rate)], [(coeff, 0, rate)])

    @classmethod
    def monomial(cls, coeff: Number, power: int) -> "LineFunction":
        return cls.build([(coeff, power, 0)], [(coeff, power, 0)])

    def piece(self, side: Side) -> HalfLineFunction:
        return self.right if side == "right" else self.left

    def __add__(self, other: "LineFunction") -> "LineFunction":
        return LineFunction(self.left + other.left, self.right + other.right)

    def __neg__(self) -> "LineFunction":
        return self.scale(-1)

    def __sub__(self, other: "LineFunction") -> "LineFunction":
        return self + (-other)

    def scale(self, c: Number) -> "LineFunction":
        return LineFunction(self.left.scale(c), self.right.scale(c))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return LineFunction(self.left * other.left, self.right * other.right)

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return self.left.is_zero and self.right.is_zero

    @property
    def square_integrable(self) -> bool:
        return self.left.square_integrable and self.right.square_integrable

    def __call__(self, x: float) -> float:
        return self.right(x) if x > 0 else self.left(x)

    # -- serialization --------------------------------------------------------
    def to_records(self) -> list[tuple[int, int, int, int, int, str]]:
        """``(coeff_num, coeff_den, power, rate_num, rate_den, side)`` tuples."""
        out = []
        for piece in (self.left, self.right):
            for t in piece.terms:
                out.append((t.coeff.numerator, t.coeff.denominator, t.power,
                            t.rate.numerator, t.rate.denominator, piece.side))
        return out

    @classmethod
    def from_records(cls, records: Iterable[Iterable]) -> "LineFunction":
        left, right = [], []
        for cn, cd, n, rn, rd, side in records:
            (left if side == "left" else right).append((Fraction(cn, cd), int(n), Fraction(rn, rd)))
        return cls.build(left, right)

    def to_json(self) -> str:
        return json.dumps([list(r) for r in self.to_records()])

    @classmethod
    def from_json(cls, text: str) -> "LineFunction":
        return cls.from_records(json.loads(text))


AnyFunction = Union[HalfLineFunction, LineFunction]


def differentiate(f: AnyFunction) -> AnyFunction:
    """Classical derivative on each open half-line; no boundary bookkeeping."""
    if isinstance(f, LineFunction):
        return LineFunction(f.left.derivative(), f.right.derivative())
    return f.derivative()


def multiply(f: AnyFunction, g: AnyFunction) -> AnyFunction:
    return f * g


def as_line(f: Mapping | AnyFunction) -> LineFunction:
    if isinstance(f, LineFunction):
        return f
    if isinstance(f, HalfLineFunction):
        return LineFunction(right=f) if f.side == "right" else LineFunction(left=f)
    raise TypeError(type(f))
