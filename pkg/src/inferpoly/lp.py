"""Exact rational linear programming.

A dense two-phase tableau simplex over :class:`fractions.Fraction` using
Bland's smallest-index rule, so it terminates on degenerate problems.  The
problems solved here are tiny (a handful of rows), so clarity wins over
sparse tricks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class LPResult:
    status: str
    x: Optional[tuple[Fraction, ...]] = None
    value: Optional[Fraction] = None

    @property
    def feasible(self) -> bool:
        return self.status != INFEASIBLE


class _Tableau:
    """Rows ``A x = b`` with an explicit basis; the objective row is kept apart."""

    def __init__(self, A: list[list[Fraction]], b: list[Fraction], basis: list[int]):
        self.A = A
        self.b = b
        self.basis = basis

    def pivot(self, r: int, c: int) -> None:
        A, b = self.A, self.b
        row = A[r]
        piv = row[c]
        if piv != 1:
            row = [v / piv for v in row]
            A[r] = row
            b[r] = b[r] / piv
        for i, other in enumerate(A):
            if i == r:
                continue
            f = other[c]
            if f:
                A[i] = [u - f * v for u, v in zip(other, row)]
                b[i] = b[i] - f * b[r]
        self.basis[r] = c

    def reduced_costs(self, c: Sequence[Fraction]) -> list[Fraction]:
        red = list(c)
        for i, j in enumerate(self.basis):
            cj = c[j]
            if cj:
                row = self.A[i]
                red = [rk - cj * ak for rk, ak in zip(red, row)]
        return red

    def run(self, c: Sequence[Fraction], allowed: int) -> str:
        """Maximise ``c.x`` using columns ``< allowed`` as entering candidates."""
        while True:
            red = self.reduced_costs(c)
            enter = next((j for j in range(allowed) if red[j] > 0), None)
            if enter is None:
                return OPTIMAL
            best = None
            for i, row in enumerate(self.A):
                a = row[enter]
                if a > 0:
                    ratio = self.b[i] / a
                    key = (ratio, self.basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                return UNBOUNDED
            self.pivot(best[1], enter)


def solve(c: Sequence, A_eq: Sequence[Sequence], b_eq: Sequence) -> LPResult:
    """Maximise ``c.x`` subject to ``A_eq x = b_eq`` and ``x >= 0``, exactly."""
    m = len(A_eq)
    n = len(c)
    if any(len(row) != n for row in A_eq) or len(b_eq) != m:
        raise ValueError("inconsistent LP dimensions")
    A = []
    b = []
    for row, rhs in zip(A_eq, b_eq):
        row = [Fraction(v) for v in row]
        rhs = Fraction(rhs)
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        A.append(row)
        b.append(rhs)
    # phase 1: artificial columns n .. n+m-1
    for i in range(m):
        A[i] = A[i] + [Fraction(int(k == i)) for k in range(m)]
    tab = _Tableau(A, b, list(range(n, n + m)))
    phase1 = [Fraction(0)] * n + [Fraction(-1)] * m
    tab.run(phase1, n + m)
    if sum(tab.b[i] for i, j in enumerate(tab.basis) if j >= n) != 0:
        return LPResult(INFEASIBLE)
    # drive zero-level artificials out of the basis; drop redundant rows
    i = 0
    while i < len(tab.A):
        if tab.basis[i] >= n:
            col = next((j for j in range(n) if tab.A[i][j] != 0), None)
            if col is None:
                del tab.A[i], tab.b[i], tab.basis[i]
                continue
            tab.pivot(i, col)
        i += 1
    tab.A = [row[:n] for row in tab.A]
    cost = [Fraction(v) for v in c]
    status = tab.run(cost, n)
    if status == UNBOUNDED:
        return LPResult(UNBOUNDED)
    x = [Fraction(0)] * n
    for i, j in enumerate(tab.basis):
        x[j] = tab.b[i]
    value = sum((cj * xj for cj, xj in zip(cost, x)), Fraction(0))
    return LPResult(OPTIMAL, tuple(x), value)


def feasible_point(A_eq: Sequence[Sequence], b_eq: Sequence) -> Optional[tuple[Fraction, ...]]:
    """Return some ``x >= 0`` with ``A_eq x = b_eq``, or ``None``."""
    n = len(A_eq[0]) if A_eq else 0
    res = solve([0] * n, A_eq, b_eq)
    return res.x if res.status == OPTIMAL else None
