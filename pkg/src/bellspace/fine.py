"""Existence of a joint distribution with the observed pairwise marginals.

Given the four conditional outcome blocks, does a single probability
distribution on quadruples (A1, A2, B1, B2) in {-1,+1}^4 exist whose
(A_i, B_j) marginals reproduce every block? The question is decided two ways:

* a phase-one simplex over the 16 quadruple probabilities and the 16 marginal
  equations (reduced to an independent subset by exact rank analysis done once
  at import). This is the trusted oracle; a feasible run returns a witness.
* the eight CHSH inequalities: every odd-minus-sign combination of the four
  pair correlations stays at or below 2. Fast, and by Fine's classic
  equivalence it must agree with the simplex on marginal-consistent tables;
  tests cross-validate the two routes, which share no code.

The simplex runs in float arithmetic with a feasibility tolerance by default;
``exact=True`` switches to Fractions so boundary verdicts (correlation
combinations equal to 2) are deterministic.

Quadruple encoding: index = 8*i1 + 4*i2 + 2*i3 + i4 over (A1, A2, B1, B2),
where bit value 0 means outcome +1 and 1 means outcome -1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import MarginalInconsistencyError
from .simplex import phase_one
from .space import ConditionalTable, DEFAULT_TOLERANCE

#: Quadruple outcome-index tuples (A1, A2, B1, B2), 0 -> +1, 1 -> -1.
QUADRUPLES: tuple[tuple[int, int, int, int], ...] = tuple(
    itertools.product((0, 1), repeat=4)
)

#: The eight CHSH sign patterns (s11, s12, s21, s22) with an odd minus count.
SIGN_PATTERNS: tuple[tuple[int, int, int, int], ...] = tuple(
    s for s in itertools.product((1, -1), repeat=4) if s[0] * s[1] * s[2] * s[3] == -1
)

#: CHSH threshold for the eight inequalities.
CHSH_BOUND = 2.0


def _marginal_rows() -> tuple[list[list[int]], list[tuple[int, int, int, int]]]:
    """All 16 marginal equations: row (i, j, e, e') selects quadruples with
    A_(i+1) at outcome index e and B_(j+1) at outcome index e'."""
    rows = []
    labels = []
    for i in range(2):
        for j in range(2):
            for e in range(2):
                for ep in range(2):
                    rows.append(
                        [1 if (quad[i] == e and quad[2 + j] == ep) else 0 for quad in QUADRUPLES]
                    )
                    labels.append((i, j, e, ep))
    return rows, labels


def _independent_rows(rows: list[list[int]]) -> list[int]:
    """Indices of a maximal linearly independent subset, by exact elimination."""
    pivots: list[tuple[list[Fraction], int]] = []
    keep: list[int] = []
    for idx, row in enumerate(rows):
        v = [Fraction(x) for x in row]
        for pivot_row, pivot_col in pivots:
            if v[pivot_col] != 0:
                f = v[pivot_col] / pivot_row[pivot_col]
                v = [a - f * b for a, b in zip(v, pivot_row)]
        if any(x != 0 for x in v):
            col = next(c for c, x in enumerate(v) if x != 0)
            pivots.append((v, col))
            keep.append(idx)
    return keep

_ALL_ROWS, _ROW_LABELS = _marginal_rows()
_KEEP = _independent_rows(_ALL_ROWS)
_ROWS_FLOAT = [[float(x) for x in _ALL_ROWS[r]] for r in _KEEP]
_ROWS_EXACT = [[Fraction(x) for x in _ALL_ROWS[r]] for r in _KEEP]
_A_FULL = np.array(_ALL_ROWS, dtype=float)


def _rhs_full(table: ConditionalTable) -> np.ndarray:
    return np.array([table.q[i, j, e, ep] for (i, j, e, ep) in _ROW_LABELS])


@dataclass(frozen=True)
class FineResult:
    """Verdict of the joint-distribution feasibility question.

    Feasible results carry a witness (probabilities over the 16 quadruples,
    see :data:`QUADRUPLES`) and its worst marginal reproduction error.
    Infeasible results carry the most violated CHSH sign pattern and its
    value. ``residual`` is the phase-one optimum (0 means exactly feasible).
    """

    feasible: bool
    arithmetic: str
    residual: float
    iterations: int
    witness: np.ndarray | None = None
    witness_exact: tuple[Fraction, ...] | None = None
    max_witness_deviation: float | None = None
    violated_signs: tuple[int, int, int, int] | None = None
    violated_value: float | None = None


def correlation_matrix(table: ConditionalTable) -> np.ndarray:
    """2x2 matrix of pair correlations of the conditional blocks."""
    return np.array([[table.correlation(i, j) for j in (1, 2)] for i in (1, 2)])


def chsh_inequality_values(q: np.ndarray) -> tuple[tuple[tuple[int, int, int, int], float], ...]:
    """The eight signed CHSH combinations of a 2x2 correlation matrix."""
    return tuple(
        (
            signs,
            float(
                signs[0] * q[0, 0] + signs[1] * q[0, 1] + signs[2] * q[1, 0] + signs[3] * q[1, 1]
            ),
        )
        for signs in SIGN_PATTERNS
    )


def joint_exists_by_inequalities(q: np.ndarray, *, tolerance: float = DEFAULT_TOLERANCE) -> bool:
    """Eight-inequality criterion: all signed combinations at or below 2."""
    return all(value <= CHSH_BOUND + tolerance for _, value in chsh_inequality_values(q))


def require_marginal_consistency(table: ConditionalTable, *, tolerance: float = DEFAULT_TOLERANCE) -> None:
    """Raise unless the blocks agree on their one-side outcome marginals."""
    deviation = table.signaling_deviation()
    if deviation > tolerance:
        raise MarginalInconsistencyError(
            "conditional blocks disagree on one-side marginals "
            f"(max deviation {deviation:.6g} > tolerance {tolerance:.6g}); "
            "the joint-distribution question presupposes consistency"
        )


def fine_feasibility(
    table: ConditionalTable,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
    exact: bool = False,
) -> FineResult:
    """Decide joint-distribution existence for the table's pairwise marginals.

    Raises :class:`MarginalInconsistencyError` when the blocks' one-side
    marginals disagree beyond tolerance. Otherwise runs the phase-one simplex
    (exactly over Fractions when ``exact=True``) and, when infeasible, names
    the most violated CHSH inequality as the certificate.
    """
    require_marginal_consistency(table, tolerance=tolerance)
    rhs_all = _rhs_full(table)

    if exact:
        rhs = [Fraction(float(rhs_all[r])) for r in _KEEP]
        result = phase_one(_ROWS_EXACT, rhs, tolerance=Fraction(0))
        feasible = result.residual == 0
        residual = float(result.residual)
    else:
        rhs = [float(rhs_all[r]) for r in _KEEP]
        result = phase_one(_ROWS_FLOAT, rhs, tolerance=1e-12)
        residual = float(result.residual)
        feasible = residual <= tolerance

    if feasible:
        witness = np.array([float(v) for v in result.solution])
        deviation = float(np.abs(_A_FULL @ witness - rhs_all).max())
        return FineResult(
            feasible=True,
            arithmetic="exact" if exact else "float",
            residual=residual,
            iterations=result.iterations,
            witness=witness,
            witness_exact=tuple(result.solution) if exact else None,
            max_witness_deviation=deviation,
        )

    signs, value = max(chsh_inequality_values(correlation_matrix(table)), key=lambda sv: sv[1])
    return FineResult(
        feasible=False,
        arithmetic="exact" if exact else "float",
        residual=residual,
        iterations=result.iterations,
        violated_signs=signs,
        violated_value=value,
    )


def witness_as_mapping(witness: np.ndarray) -> dict[str, float]:
    """Witness probabilities keyed by sign strings over (A1, A2, B1, B2),
    e.g. ``"++-+"`` for (+1, +1, -1, +1)."""
    keys = ["".join("+" if bit == 0 else "-" for bit in quad) for quad in QUADRUPLES]
    return {k: float(v) for k, v in zip(keys, witness)}
