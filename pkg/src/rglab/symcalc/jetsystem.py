"""Linear jet system constraining a potential at a point interaction.

For ``h = -d^2/dx^2 + lam*delta`` and a potential ``V`` that is smooth on each
side of the origin, ``V psi`` must stay in the domain of ``h^k`` whenever
``psi`` does. At the level of jets this is a linear system in the unknown
one-sided derivatives ``V^(i)(0-)``, ``V^(i)(0+)``:

* a jet of ``psi`` in ``D(h^k)`` is parametrised by ``e_m`` (even orders, equal
  on both sides) and ``o_m`` (odd orders, ``psi^(m)(0+) = o_m + lam*e_(m-1)``
  and ``psi^(m)(0-) = o_m``);
* ``V psi`` must satisfy the same matching rules, written through Leibniz'
  rule, for every basis jet.

Imposing the conditions up to order ``2k-1`` (those of ``D(h^k)``) pins down
``V^(j)(0) = 0`` for ``1 <= j <= 2k-3``; the null space keeps the constant
``V`` and the derivatives of order ``2k-2`` and above.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .linalg import nullspace

DEFAULT_PROBE_LAMBDAS: tuple[Fraction, ...] = tuple(Fraction(x) for x in (-2, -1, 1, 3))


class InconsistentSystemError(RuntimeError):
    """The assembled system rejects the constant potential; this is a bug."""


@dataclass(frozen=True)
class JetSystem:
    """Assembled constraint matrix; column ``2i`` is ``V^(i)(0-)``, ``2i+1`` is ``V^(i)(0+)``."""

    lam: Fraction
    max_condition: int
    n_orders: int
    rows: tuple[tuple[Fraction, ...], ...]

    @property
    def ncols(self) -> int:
        return 2 * self.n_orders


def psi_basis_jets(lam: Fraction, n_coeffs: int) -> list[tuple[list[Fraction], list[Fraction]]]:
    """``(jet at 0-, jet at 0+)`` for each free parameter of a domain-compatible jet."""
    out = []
    for p in range(n_coeffs):
        params = [Fraction(0)] * n_coeffs
        params[p] = Fraction(1)
        minus = [Fraction(0)] * n_coeffs
        plus = [Fraction(0)] * n_coeffs
        for m in range(n_coeffs):
            minus[m] = params[m]
            plus[m] = params[m] if m % 2 == 0 else params[m] + lam * params[m - 1]
        out.append((minus, plus))
    return out


def _leibniz_row(psi: Sequence[Fraction], m: int, side: int, n_orders: int) -> list[Fraction]:
    """Coefficients of ``(V psi)^(m)`` at one side in terms of the V unknowns."""
    row = [Fraction(0)] * (2 * n_orders)
    for i in range(m + 1):
        if i < n_orders:
            row[2 * i + side] += comb(m, i) * psi[m - i]
    return row


def assemble(lam: Fraction, k_max: int, n_coeffs: int | None = None) -> JetSystem:
    """Conditions of ``D(h^k_max)`` imposed on ``V psi`` for every basis jet ``psi``.

    ``n_coeffs`` is the psi jet length per side (default ``2*k_max + 4``); the
    V unknowns run over orders ``0..2*k_max``.
    """
    lam = Fraction(lam)
    if lam == 0:
        raise ValueError("the jet system needs a nonzero coupling lam")
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    if n_coeffs is None:
        n_coeffs = 2 * k_max + 4
    max_condition = 2 * k_max - 1
    n_orders = 2 * k_max + 1
    rows = []
    for minus, plus in psi_basis_jets(lam, n_coeffs):
        for m in range(max_condition + 1):
            left = _leibniz_row(minus, m, 0, n_orders)
            right = _leibniz_row(plus, m, 1, n_orders)
            if m % 2 == 0:
                row = [a - b for a, b in zip(left, right)]
            else:
                below = _leibniz_row(plus, m - 1, 1, n_orders)
                row = [b - a - lam * c for a, b, c in zip(left, right, below)]
            if any(row):
                rows.append(tuple(row))
    return JetSystem(lam, max_condition, n_orders, tuple(rows))


@dataclass(frozen=True)
class CompatibilityResult:
    lam: Fraction
    forced: tuple[int, ...]
    continuous: tuple[int, ...]
    nullity: int


def analyse(system: JetSystem) -> CompatibilityResult:
    basis = nullspace(system.rows, system.ncols)
    const = [Fraction(1) if c in (0, 1) else Fraction(0) for c in range(system.ncols)]
    for row in system.rows:
        if sum(a * b for a, b in zip(row, const)) != 0:
            raise InconsistentSystemError("constant potential violates the jet system")
    forced = tuple(
        i for i in range(1, system.n_orders)
        if all(v[2 * i] == 0 and v[2 * i + 1] == 0 for v in basis)
    )
    continuous = tuple(
        i for i in range(system.n_orders)
        if all(v[2 * i] == v[2 * i + 1] for v in basis)
    )
    return CompatibilityResult(system.lam, forced, continuous, len(basis))


def potential_compatibility_delta(
    k_max: int, lambdas: Iterable = DEFAULT_PROBE_LAMBDAS
) -> list[int]:
    """Orders ``j >= 1`` at which ``V^(j)(0) = 0`` is forced, certified for every probe ``lam``.

    Raises ``RuntimeError`` if the forced set depends on the probe value.
    """
    results = compatibility_by_lambda(k_max, lambdas)
    sets = {r.forced for r in results}
    if len(sets) != 1:
        raise RuntimeError(f"forced orders depend on lam: { {str(r.lam): r.forced for r in results} }")
    return list(sets.pop())


def compatibility_by_lambda(k_max: int, lambdas: Iterable = DEFAULT_PROBE_LAMBDAS) -> list[CompatibilityResult]:
    lambdas = [Fraction(x) for x in lambdas]
    if not lambdas:
        raise ValueError("need at least one probe lam")
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    return [analyse(assemble(lam, k_max)) for lam in lambdas]
