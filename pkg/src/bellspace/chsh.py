"""Absolute and conditional correlations and the CHSH bound family.

Two correlation readings coexist for each setting pair (i, j):

* absolute ``C_ij``: expectation of A_i * B_j over the whole space, where the
  nondetection value 0 silently drops non-selected trials. It absorbs the
  setting weights.
* conditional ``Q_ij``: expectation conditioned on the pair (i, j) being
  selected; this is the number an experimenter reports for fixed settings.
  The two are tied by ``C_ij = p(a=i, b=j) * Q_ij``.

The combination S = (1,1) + (1,2) + (2,1) - (2,2) obeys |S| <= 2 over the C's
by the classical CHSH theorem, and in this model the stronger |S| <= 1 holds
(each |C_ij| is capped by its setting weight, and the weights sum to 1). The
same combination over the Q's may exceed 2 -- up to the quantum bound
2*sqrt(2) for tables generated by quantum predictions -- because the weighted
inequality, not the unweighted one, is what classical probability licenses.
With uniform weights 1/4 the two classical bounds translate to 8 and 4 for
the conditional combination.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import MarginalInconsistencyError
from .fine import FineResult, fine_feasibility
from .space import (
    DEFAULT_TOLERANCE,
    SETTINGS,
    ConditionalTable,
    SampleSpace,
    SettingDistribution,
    build_space,
)

TSIRELSON_BOUND = 2.0 * math.sqrt(2.0)


def chsh_combination(values: np.ndarray) -> float:
    """S = v11 + v12 + v21 - v22 for a 2x2 matrix of correlations."""
    return float(values[0, 0] + values[0, 1] + values[1, 0] - values[1, 1])


@dataclass(frozen=True)
class CorrelationSet:
    """Absolute (C) and conditional (Q) correlations with the weights that tie
    them. Conditional entries for zero-weight setting pairs are NaN."""

    absolute: np.ndarray  # (2, 2)
    conditional: np.ndarray  # (2, 2), NaN where undefined
    weights: np.ndarray  # (2, 2)

    def c(self, i: int, j: int) -> float:
        return float(self.absolute[i - 1, j - 1])

    def q(self, i: int, j: int) -> float:
        return float(self.conditional[i - 1, j - 1])

    def defined(self, i: int, j: int) -> bool:
        return not math.isnan(self.q(i, j))

    def undefined_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in SETTINGS for j in SETTINGS if not self.defined(i, j)]

    @property
    def all_defined(self) -> bool:
        return not self.undefined_pairs()


def correlations(space: SampleSpace) -> CorrelationSet:
    """Compute C and Q for all four setting pairs by atom enumeration.

    C_ij sums eps*eps' over the pair's four atoms; Q_ij divides by the setting
    weight and is NaN when that weight is zero.
    """
    signs = np.array([[1.0, -1.0], [-1.0, 1.0]])  # eps * eps' on the outcome grid
    absolute = np.einsum("ijkl,kl->ij", space.probs, signs)
    w = space.settings.weights
    conditional = np.where(w > 0.0, absolute / np.where(w > 0.0, w, 1.0), np.nan)
    return CorrelationSet(absolute=absolute, conditional=conditional, weights=w.copy())


@dataclass(frozen=True)
class BoundCheck:
    """One inequality evaluation. ``satisfied`` is None when the quantity is
    undefined (some Q_ij missing)."""

    name: str
    value: float | None
    threshold: float
    satisfied: bool | None


@dataclass(frozen=True)
class ChshReport:
    """The CHSH combination in both readings, every bound evaluation, and the
    joint-distribution verdict for the conditional table."""

    correlation_set: CorrelationSet
    s_abs: float
    s_cond: float | None
    bounds: tuple[BoundCheck, ...]
    fine: FineResult | None
    fine_error: str | None

    def bound(self, name: str) -> BoundCheck:
        for b in self.bounds:
            if b.name == name:
                return b
        raise KeyError(name)


def chsh_report(
    space: SampleSpace,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
    exact_lp: bool = False,
    run_feasibility: bool = True,
) -> ChshReport:
    """Evaluate S in both readings against all thresholds and (optionally)
    decide joint-distribution existence for the conditional table.

    Violations are findings, never errors. The feasibility call is skipped
    with an explanatory message when the table's one-side marginals are
    inconsistent, since the question is then ill-posed.
    """
    corr = correlations(space)
    s_abs = chsh_combination(corr.absolute)
    s_cond = chsh_combination(corr.conditional) if corr.all_defined else None

    bounds = [
        BoundCheck("classical |S_abs| <= 2", s_abs, 2.0, abs(s_abs) <= 2.0 + tolerance),
        BoundCheck("strengthened |S_abs| <= 1", s_abs, 1.0, abs(s_abs) <= 1.0 + tolerance),
        BoundCheck(
            "weighted conditional |sum w_ij s_ij Q_ij| <= 2",
            s_abs,  # identical number: the weights fold the Q's back into the C's
            2.0,
            abs(s_abs) <= 2.0 + tolerance,
        ),
        BoundCheck(
            "unweighted conditional |S_cond| <= 2",
            s_cond,
            2.0,
            None if s_cond is None else abs(s_cond) <= 2.0 + tolerance,
        ),
        BoundCheck(
            "tsirelson |S_cond| <= 2*sqrt(2)",
            s_cond,
            TSIRELSON_BOUND,
            None if s_cond is None else abs(s_cond) <= TSIRELSON_BOUND + tolerance,
        ),
    ]

    fine = None
    fine_error = None
    if run_feasibility:
        try:
            fine = fine_feasibility(space.table, tolerance=tolerance, exact=exact_lp)
        except MarginalInconsistencyError as exc:
            fine_error = str(exc)

    return ChshReport(
        correlation_set=corr,
        s_abs=s_abs,
        s_cond=s_cond,
        bounds=tuple(bounds),
        fine=fine,
        fine_error=fine_error,
    )


@dataclass(frozen=True)
class CurvePoint:
    """S in both readings for one choice of setting weights. For uniform
    weights the classical bounds |S_abs| <= 2 and <= 1 translate into bounds
    8 and 4 on the conditional combination; those constants are reported."""

    weights: np.ndarray
    s_abs: float
    s_cond: float | None
    implied_bound_classical: float | None  # 8 for uniform weights
    implied_bound_strengthened: float | None  # 4 for uniform weights


def weighted_chsh_curve(
    table: ConditionalTable,
    weight_grid: Sequence[SettingDistribution],
    *,
    tolerance: float = DEFAULT_TOLERANCE,
) -> list[CurvePoint]:
    """Evaluate the CHSH combination across setting-weight choices for a fixed
    conditional table. S_cond depends only on the table; S_abs scales with the
    weights entry-wise."""
    points = []
    for settings in weight_grid:
        corr = correlations(build_space(settings, table))
        s_abs = chsh_combination(corr.absolute)
        s_cond = chsh_combination(corr.conditional) if corr.all_defined else None
        uniform = bool(np.all(np.abs(settings.weights - 0.25) <= tolerance))
        points.append(
            CurvePoint(
                weights=settings.weights.copy(),
                s_abs=s_abs,
                s_cond=s_cond,
                implied_bound_classical=8.0 if uniform else None,
                implied_bound_strengthened=4.0 if uniform else None,
            )
        )
    return points
