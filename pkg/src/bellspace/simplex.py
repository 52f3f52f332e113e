"""Phase-one simplex for small dense equality-constrained feasibility problems.

Decides whether {x >= 0 : A x = b} is nonempty by minimizing the sum of
artificial variables with a dense tableau and Bland's anti-cycling rule. The
arithmetic is generic: float inputs run with a feasibility tolerance, Fraction
inputs run exactly (pass ``tolerance=0``). Problem sizes here are tiny (tens
of rows/columns), so clarity and determinism beat sparse cleverness.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence


@dataclass(frozen=True)
class PhaseOneResult:
    """Residual infeasibility (phase-one optimum), a basic solution for the
    structural variables, and the iteration count."""

    residual: object  # float or Fraction
    solution: list
    iterations: int

    def feasible(self, tolerance) -> bool:
        return self.residual <= tolerance


def phase_one(rows: Sequence[Sequence], rhs: Sequence, *, tolerance=1e-12) -> PhaseOneResult:
    """Run phase one on A x = b, x >= 0, with b >= 0 entry-wise.

    ``tolerance`` guards pivot selection and the ratio test; use 0 for exact
    (Fraction) arithmetic. Rows must be linearly independent for a meaningful
    residual, and every rhs entry must be nonnegative (callers here pass
    probabilities).
    """
    m = len(rows)
    n = len(rows[0]) if m else 0
    zero = rhs[0] * 0 if m else 0  # preserves Fraction vs float arithmetic
    one = zero + 1

    for r, beta in enumerate(rhs):
        if beta < zero:
            raise ValueError(f"rhs[{r}] is negative: {beta!r}")

    width = n + m + 1
    tableau = []
    for r in range(m):
        row = list(rows[r]) + [zero] * m + [rhs[r]]
        row[n + r] = one
        tableau.append(row)
    basis = [n + r for r in range(m)]

    # reduced-cost row for minimizing the artificial sum, priced out over the
    # artificial basis: structural entries are column sums, artificials 0
    obj = [zero] * width
    for row in tableau:
        for c in range(width):
            obj[c] = obj[c] + row[c]
    for c in range(n, n + m):
        obj[c] = obj[c] - one

    iterations = 0
    while True:
        entering = -1
        for c in range(n + m):
            if obj[c] > tolerance:
                entering = c
                break
        if entering < 0:
            break
        iterations += 1

        leaving = -1
        best_ratio = None
        for r in range(m):
            coeff = tableau[r][entering]
            if coeff > tolerance:
                ratio = tableau[r][width - 1] / coeff
                if (
                    best_ratio is None
                    or ratio < best_ratio
                    or (ratio == best_ratio and basis[r] < basis[leaving])
                ):
                    best_ratio = ratio
                    leaving = r
        if leaving < 0:
            # cannot happen: the artificial objective is bounded below by 0
            raise RuntimeError("phase-one ratio test found no pivot row")

        pivot_row = tableau[leaving]
        pivot = pivot_row[entering]
        inv = one / pivot
        for c in range(width):
            pivot_row[c] = pivot_row[c] * inv
        for r in range(m):
            if r == leaving:
                continue
            factor = tableau[r][entering]
            if factor != zero:
                row = tableau[r]
                for c in range(width):
                    row[c] = row[c] - factor * pivot_row[c]
        factor = obj[entering]
        if factor != zero:
            for c in range(width):
                obj[c] = obj[c] - factor * pivot_row[c]
        basis[leaving] = entering

    residual = obj[width - 1]
    if residual < zero:
        residual = zero  # tiny negative round-off on the optimum
    solution = [zero] * n
    for r in range(m):
        if basis[r] < n:
            value = tableau[r][width - 1]
            solution[basis[r]] = value if value > zero else zero
    return PhaseOneResult(residual=residual, solution=solution, iterations=iterations)


def exact_rows(rows: Sequence[Sequence[float]]) -> list[list[Fraction]]:
    """Convert numeric rows to exact Fractions (floats convert exactly)."""
    return [[Fraction(v) for v in row] for row in rows]
