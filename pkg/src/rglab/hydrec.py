"""Exact recursion behind the radial-hydrogen smoothness argument.

For ``f(r) = a r^(2n-1) + b r^(2n) + O(r^(2n+1))`` the reduced operator
``h0 = -d^2/dr^2 - 1/r`` maps the leading pair ``(a, b)`` to ``-T_n (a, b)``
with ``T_n = ((2n-1)(2n-2), 0; 1, 2n(2n-1))``. Chaining these gives the
value ``h0^n f(0)`` as a dot product with ``T_n^T ... T_2^T (1, 2)``, which
has the closed form ``((2n-1)! * sum_{j<=n} 1/(2j-1), (2n)!)``.

The 2x2 system in ``(v, u) = (V^(2k-2)(0), V^(2k-1)(0))`` is assembled from
its closed-form rows and, independently, by pushing a polynomial ``V``
times the two-state probe ``psi`` through ``h0`` with the exact engine.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

from .symcalc.domain import RadialHamiltonian, boundary_jet, iterate
from .symcalc.expoly import HalfLineFunction
from .symcalc.linalg import nullspace

Matrix2 = tuple[tuple[Fraction, Fraction], tuple[Fraction, Fraction]]


class IdentityMismatchError(AssertionError):
    """Two exact routes to the same quantity disagree."""


def odd_harmonic(n: int) -> Fraction:
    """``sum_{j=1}^n 1/(2j-1)``."""
    return sum((Fraction(1, 2 * j - 1) for j in range(1, n + 1)), Fraction(0))


def t_matrix(n: int) -> Matrix2:
    if n < 2:
        raise ValueError(f"T_n is defined for n >= 2, got {n}")
    return ((Fraction((2 * n - 1) * (2 * n - 2)), Fraction(0)),
            (Fraction(1), Fraction(2 * n * (2 * n - 1))))


def _transpose_apply(m: Matrix2, vec: tuple[Fraction, Fraction]) -> tuple[Fraction, Fraction]:
    return (m[0][0] * vec[0] + m[1][0] * vec[1], m[0][1] * vec[0] + m[1][1] * vec[1])


def cumulative_closed_form(n: int) -> tuple[Fraction, Fraction]:
    return (factorial(2 * n - 1) * odd_harmonic(n), Fraction(factorial(2 * n)))


def cumulative_vector(n: int) -> tuple[Fraction, Fraction]:
    """``T_n^T ... T_2^T (1, 2)``, computed by iteration and checked against the closed form."""
    if n < 1:
        raise ValueError("n must be >= 1")
    vec = (Fraction(1), Fraction(2))
    for m in range(2, n + 1):
        vec = _transpose_apply(t_matrix(m), vec)
    closed = cumulative_closed_form(n)
    if vec != closed:
        raise IdentityMismatchError(f"n={n}: product {vec} != closed form {closed}")
    return vec


@dataclass(frozen=True)
class SystemA:
    """Rows act on ``(v, u) = (V^(2k-2)(0), V^(2k-1)(0))``."""

    k: int
    matrix: Matrix2
    det: Fraction

    def kernel(self) -> list[list[Fraction]]:
        return nullspace(self.matrix, 2)

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "rows": [[str(x) for x in row] for row in self.matrix],
            "det_num": self.det.numerator,
            "det_den": self.det.denominator,
        }


def assemble_system(k: int) -> SystemA:
    if k < 2:
        raise ValueError(f"the system is defined for k >= 2, got {k}")
    row1 = (comb(2 * k + 1, 3) * odd_harmonic(k + 1) - Fraction(4, 3) * comb(2 * k + 2, 4),
            Fraction(comb(2 * k + 2, 3)))
    row2 = (-(2 * k - 1) * (k - odd_harmonic(k)), Fraction(2 * k))
    det = row1[0] * row2[1] - row1[1] * row2[0]
    return SystemA(k, (row1, row2), det)


def determinant_closed_form(k: int) -> Fraction:
    return comb(2 * k + 1, 3) * (Fraction(2, 3) * k * (k + 1) + Fraction(2 * k, 2 * k + 1)
                                 - 2 * odd_harmonic(k))


def determinant_lower_bound_factor(k: int) -> Fraction:
    """Bracket of the closed form with ``sum 1/(2j-1)`` replaced by its upper bound ``k``."""
    return Fraction(2, 3) * k * (k + 1) + Fraction(2 * k, 2 * k + 1) - 2 * k


def determinant_closed_form_check(k: int) -> Fraction:
    """Closed-form determinant, checked against the assembled system and shown positive."""
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    closed = determinant_closed_form(k)
    assembled = assemble_system(k).det
    if closed != assembled:
        raise IdentityMismatchError(f"k={k}: closed form {closed} != assembled {assembled}")
    bound = determinant_lower_bound_factor(k)
    if bound <= 0 or closed < comb(2 * k + 1, 3) * bound:
        raise IdentityMismatchError(f"k={k}: positivity bound fails ({bound})")
    return closed


# -- the explicit test state ---------------------------------------------------

def two_state_probe() -> HalfLineFunction:
    """``(16/3) r (e^(-r/2) - (1 - r/4) e^(-r/4))``: first nonzero Taylor coefficient at ``r^3``."""
    c = Fraction(16, 3)
    return HalfLineFunction.build([
        (c, 1, Fraction(-1, 2)),
        (-c, 1, Fraction(-1, 4)),
        (c / 4, 2, Fraction(-1, 4)),
    ])


@dataclass(frozen=True)
class PsiChecks:
    jet: tuple[Fraction, ...]
    h0_psi_jet: tuple[Fraction, ...]
    annihilated: bool

    @property
    def ok(self) -> bool:
        return (self.jet[:4] == (0, 0, 0, 1) and self.h0_psi_jet[1] == -1 and self.annihilated)


def check_two_state_probe() -> PsiChecks:
    """Jets of ``psi`` and ``h0 psi`` and the two-eigenvalue annihilation relation."""
    psi = two_state_probe()
    h = RadialHamiltonian()
    h_psi = iterate(psi, h, 1)
    hh_psi = iterate(h_psi, h, 1)
    # eigenvalues -1/4 and -1/16: (h0 + 1/4)(h0 + 1/16) = h0^2 + (5/16) h0 + 1/64
    residual = hh_psi + h_psi.scale(Fraction(5, 16)) + psi.scale(Fraction(1, 64))
    return PsiChecks(
        jet=boundary_jet(psi, "0+", 4).coefficients,
        h0_psi_jet=boundary_jet(h_psi, "0+", 2).coefficients,
        annihilated=residual.is_zero,
    )


def system_rows_from_expansion(k: int, extra_terms: tuple[tuple[Fraction, int], ...] = ()) -> Matrix2:
    """Rows of the 2x2 system recomputed from ``V psi`` with the exact engine.

    ``V`` is the polynomial ``v r^(2k-2)/(2k-2)! + u r^(2k-1)/(2k-1)!`` plus
    optional higher-order ``(coeff, power)`` terms that must not matter. Row 1
    is ``(-1)^(k+1) h0^(k+1)(V psi)(0)``, row 2 is ``(-1)^(k+1) h0^k(V h0 psi)(0)``.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    psi = two_state_probe()
    h = RadialHamiltonian()
    h_psi = iterate(psi, h, 1)
    sign = (-1) ** (k + 1)
    cols = []
    for v, u in ((1, 0), (0, 1)):
        poly = HalfLineFunction.build(
            [(Fraction(v, factorial(2 * k - 2)), 2 * k - 2, 0),
             (Fraction(u, factorial(2 * k - 1)), 2 * k - 1, 0),
             *((c, p, 0) for c, p in extra_terms)])
        first = iterate(poly * psi, h, k + 1).value_at_zero()
        second = iterate(poly * h_psi, h, k).value_at_zero()
        cols.append((sign * first, sign * second))
    return ((cols[0][0], cols[1][0]), (cols[0][1], cols[1][1]))


def hydrogen_report(k: int) -> dict:
    system = assemble_system(k)
    det = determinant_closed_form_check(k)
    return {
        "k": k,
        "det_num": det.numerator,
        "det_den": det.denominator,
        "positive": det > 0,
        "closed_form_match": det == system.det,
        "kernel_trivial": not system.kernel(),
    }
