"""Noncommutative words in ``H`` and ``W`` acting on a fixed state, and real bilinear forms.

Words are tuples of letters read left to right as operators, applied to
``Psi0`` on the right. The rewrite rules are taken as axioms:

* ``W`` commutes past ``H`` when the word acts on ``Psi0`` (at most four
  letters ``H``), so every word normalizes to ``W^a H^b``;
* ``W`` is self-adjoint and commutes with ``A`` inside a pairing, so
  ``<W^a H^b | A W^c H^d>`` becomes ``<H^b | A W^(a+c) H^d>``;
* ``A`` is symmetric and only real parts are kept, so
  ``Re<H^b | A W^n H^d> = Re<H^d | A W^n H^b>``.

The canonical key of a term is ``(min(b, d), n, max(b, d))``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import comb
from typing import Iterable, Mapping

Word = tuple[str, ...]
Key = tuple[int, int, int]

MAX_WORD_LENGTH = 8
MAX_H_POWER = 4


class NonzeroResidueError(AssertionError):
    """The reduced form is not zero."""


def normal_form(word: Word) -> tuple[int, int]:
    """``(a, b)`` with ``word Psi0 = W^a H^b Psi0``."""
    if len(word) > MAX_WORD_LENGTH:
        raise ValueError(f"word longer than {MAX_WORD_LENGTH}")
    if any(c not in ("H", "W") for c in word):
        raise ValueError(f"unknown letter in {word}")
    a, b = word.count("W"), word.count("H")
    if b > MAX_H_POWER:
        raise ValueError("the commutation axiom is only assumed for at most four H letters")
    return a, b


LinearCombination = Mapping[Word, Fraction]


def word(text: str) -> Word:
    return tuple(text)


def expand_power(k: int, letters: tuple[str, str] = ("H", "W")) -> dict[Word, Fraction]:
    """``(H + W)^k`` as the sum of its ``2^k`` words."""
    return {w: Fraction(1) for w in product(letters, repeat=k)}


def combo(terms: Iterable[tuple[int, str]]) -> dict[Word, Fraction]:
    """Linear combination from ``(coeff, "WHH")`` pairs."""
    out: dict[Word, Fraction] = defaultdict(Fraction)
    for c, text in terms:
        out[word(text)] += Fraction(c)
    return dict(out)


@dataclass
class BilinearForm:
    """Formal ``2 Re sum coeff <left Psi0 | A right Psi0>``."""

    terms: dict[tuple[Word, Word], Fraction] = field(default_factory=lambda: defaultdict(Fraction))
    real_part: bool = True

    def add_pairing(self, coeff, left: LinearCombination, right: LinearCombination) -> "BilinearForm":
        coeff = Fraction(coeff)
        for lw, lc in left.items():
            for rw, rc in right.items():
                self.terms[(lw, rw)] += coeff * lc * rc
        return self

    def __sub__(self, other: "BilinearForm") -> "BilinearForm":
        out = BilinearForm()
        for k, v in self.terms.items():
            out.terms[k] += v
        for k, v in other.terms.items():
            out.terms[k] -= v
        return out

    def normal_pairs(self) -> dict[tuple[tuple[int, int], tuple[int, int]], Fraction]:
        """Terms with both words in normal form, before any use of ``A`` or the real part."""
        out: dict = defaultdict(Fraction)
        for (lw, rw), c in self.terms.items():
            out[(normal_form(lw), normal_form(rw))] += c
        return {k: v for k, v in out.items() if v != 0}

    def reduce(self, use_real_part: bool = True) -> "ReducedForm":
        """Canonical keys ``(b, n, d)``; with ``use_real_part`` the pair ``b, d`` is sorted."""
        collected: dict[Key, Fraction] = defaultdict(Fraction)
        raw: dict[int, list[Fraction]] = defaultdict(list)
        for (lw, rw), c in self.terms.items():
            if c == 0:
                continue
            a, b = normal_form(lw)
            cc, d = normal_form(rw)
            n = a + cc
            key = (min(b, d), n, max(b, d)) if use_real_part else (b, n, d)
            collected[key] += c
            raw[n].append(c)
        return ReducedForm({k: v for k, v in collected.items()}, {n: tuple(v) for n, v in raw.items()})


@dataclass(frozen=True)
class ReducedForm:
    coefficients: Mapping[Key, Fraction]
    raw_by_power: Mapping[int, tuple[Fraction, ...]]

    @property
    def is_zero(self) -> bool:
        return all(v == 0 for v in self.coefficients.values())

    def coefficient_by_power(self, n: int) -> Fraction:
        """Sum of all raw coefficients at total ``W`` power ``n``."""
        return sum(self.raw_by_power.get(n, ()), Fraction(0))

    def residue_by_power(self, n: int) -> dict[Key, Fraction]:
        return {k: v for k, v in self.coefficients.items() if k[1] == n}

    def to_dict(self) -> dict:
        return {
            "zero": self.is_zero,
            "per_power": {str(n): str(self.coefficient_by_power(n)) for n in range(0, 5)},
            "terms": {f"<H^{b}|A W^{n} H^{d}>": str(v) for (b, n, d), v in sorted(self.coefficients.items())},
        }


def g_form(h_power_expansions: Mapping[int, LinearCombination]) -> BilinearForm:
    """``<H^4 Psi|A Psi> - 4 <H^3 Psi|A H Psi> + 3 <H^2 Psi|A H^2 Psi>`` for a given ``H``."""
    one = {(): Fraction(1)}
    e = h_power_expansions
    return (BilinearForm()
            .add_pairing(1, e[4], one)
            .add_pairing(-4, e[3], e[1])
            .add_pairing(3, e[2], e[2]))


def difference_from_definition() -> BilinearForm:
    """``g_2 - g_1`` with ``H_2 = H + W`` expanded word by word (no binomial shortcut)."""
    h2 = {k: expand_power(k) for k in range(5)}
    h1 = {k: {tuple("H" * k): Fraction(1)} for k in range(5)}
    return g_form(h2) - g_form(h1)


def difference_as_displayed() -> BilinearForm:
    """The expanded difference transcribed term by term, with ``W`` already moved left."""
    one = {(): Fraction(1)}
    f = BilinearForm()
    f.add_pairing(4, combo([(1, "WHHH")]), one)
    f.add_pairing(6, combo([(1, "WWHH")]), one)
    f.add_pairing(4, combo([(1, "WWWH")]), one)
    f.add_pairing(1, combo([(1, "WWWW")]), one)
    f.add_pairing(-4, combo([(1, "HHH"), (3, "WHH"), (3, "WWH"), (1, "WWW")]), combo([(1, "W")]))
    f.add_pairing(-4, combo([(3, "WHH"), (3, "WWH"), (1, "WWW")]), combo([(1, "H")]))
    f.add_pairing(3, combo([(2, "WH"), (1, "WW")]), combo([(1, "HH"), (2, "WH"), (1, "WW")]))
    f.add_pairing(3, combo([(1, "HH")]), combo([(2, "WH"), (1, "WW")]))
    return f


def binomial_normal_form(k: int) -> dict[tuple[int, int], Fraction]:
    """Normal form of ``(H + W)^k Psi0`` collected as ``{(a, b): coeff}``."""
    out: dict[tuple[int, int], Fraction] = defaultdict(Fraction)
    for w, c in expand_power(k).items():
        out[normal_form(w)] += c
    return dict(out)


def binomial_matches(k: int) -> bool:
    return binomial_normal_form(k) == {(j, k - j): Fraction(comb(k, j)) for j in range(k + 1)}


@dataclass(frozen=True)
class CancellationReport:
    displayed: ReducedForm
    definition: ReducedForm
    transcription_agrees: bool
    without_real_part: ReducedForm

    @property
    def per_power(self) -> tuple[Fraction, ...]:
        return tuple(self.displayed.coefficient_by_power(n) for n in range(1, 5))

    def to_dict(self) -> dict:
        return {"displayed": self.displayed.to_dict(), "definition": self.definition.to_dict(),
                "transcription_agrees": self.transcription_agrees,
                "zero_without_real_part": self.without_real_part.is_zero,
                "per_power": [str(x) for x in self.per_power],
                "w4_raw": [str(x) for x in self.displayed.raw_by_power.get(4, ())]}


def w_cancellation_reduce(strict: bool = True) -> CancellationReport:
    """Reduce ``g_2(0) - g_1(0)`` along two independent expansion paths."""
    shown, defined = difference_as_displayed(), difference_from_definition()
    agrees = shown.normal_pairs() == defined.normal_pairs()
    displayed, definition = shown.reduce(), defined.reduce()
    report = CancellationReport(displayed, definition, agrees, shown.reduce(use_real_part=False))
    if strict and not (displayed.is_zero and definition.is_zero):
        raise NonzeroResidueError(f"residue: {displayed.coefficients} / {definition.coefficients}")
    return report
