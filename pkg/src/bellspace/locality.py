"""Probabilistic locality and no-signaling checks.

All conditions are stated purely in terms of independence of the six random
variables; there is no space-time modeling. Two structural conditions are
checked numerically:

* setting independence -- the two setting generators are independent,
  p(a=i, b=j) = p(a=i) p(b=j);
* remote-setting independence -- each (observable, own generator) pair is
  independent of the far side's generator.

The second implies the first. From them follow the detection/nondetection
factorizations and the reduction of two-side conditioning to one-side
conditioning, both verified here by enumeration. Marginal consistency of
absolute probabilities holds in any measure; its conditional counterpart (the
no-signaling property of the conditional tables) can fail, and the failure is
quantified.

A note on single-index observables: by construction the four observables are
indexed by their own side's setting only (there is no A_ij), so that locality
condition holds structurally for every space this package can represent.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import NullConditioningError
from .queries import (
    FAIL,
    NOT_APPLICABLE,
    PASS,
    IdentityLine,
    observable_is,
    probability,
    setting_is,
    setting_is_not,
)
from .space import (
    DEFAULT_TOLERANCE,
    OUTCOMES,
    SETTINGS,
    A1,
    A2,
    B1,
    B2,
    SampleSpace,
)

_OBS = {("A", 1): A1, ("A", 2): A2, ("B", 1): B1, ("B", 2): B2}
_VALUES = (-1, 0, 1)


@dataclass(frozen=True)
class LocalityReport:
    """Outcome of one check: verdict, worst deviation, and per-identity lines."""

    name: str
    passed: bool
    max_deviation: float
    lines: tuple[IdentityLine, ...]
    note: str | None = None

    def failures(self) -> list[IdentityLine]:
        return [line for line in self.lines if line.status == FAIL]


def _line(name: str, lhs: float, rhs: float, tolerance: float) -> IdentityLine:
    dev = abs(lhs - rhs)
    return IdentityLine(name, lhs, rhs, dev, PASS if dev <= tolerance else FAIL)


def _finish(name: str, lines: list[IdentityLine], note: str | None = None) -> LocalityReport:
    devs = [line.deviation for line in lines if line.deviation is not None]
    max_dev = max(devs) if devs else 0.0
    passed = all(line.status != FAIL for line in lines)
    return LocalityReport(name, passed, max_dev, tuple(lines), note)


def setting_independence(
    space: SampleSpace, *, tolerance: float = DEFAULT_TOLERANCE
) -> LocalityReport:
    """Are the two setting generators independent? p(a=i,b=j) = p(a=i)p(b=j)."""
    lines = [
        _line(
            f"p(a={i},b={j}) == p(a={i})*p(b={j})",
            space.settings.weight(i, j),
            space.settings.prob_a(i) * space.settings.prob_b(j),
            tolerance,
        )
        for i in SETTINGS
        for j in SETTINGS
    ]
    return _finish("setting-independence", lines)


def remote_setting_independence(
    space: SampleSpace, *, tolerance: float = DEFAULT_TOLERANCE
) -> LocalityReport:
    """Is each (observable, own generator) pair independent of the far
    generator? Checks p(A_i=x, a=k, b=m) = p(A_i=x, a=k) p(b=m) over all
    x in {-1,0,+1}, i, k, m, and symmetrically for the B side."""
    lines: list[IdentityLine] = []
    for i in SETTINGS:
        for x in _VALUES:
            ev = observable_is(_OBS[("A", i)], x)
            for k in SETTINGS:
                own = ev & setting_is("A", k)
                p_own = probability(space, own)
                for m in SETTINGS:
                    lines.append(
                        _line(
                            f"p(A{i}={x:+d},a={k},b={m}) == p(A{i}={x:+d},a={k})*p(b={m})",
                            probability(space, own & setting_is("B", m)),
                            p_own * space.settings.prob_b(m),
                            tolerance,
                        )
                    )
    for j in SETTINGS:
        for x in _VALUES:
            ev = observable_is(_OBS[("B", j)], x)
            for m in SETTINGS:
                own = ev & setting_is("B", m)
                p_own = probability(space, own)
                for k in SETTINGS:
                    lines.append(
                        _line(
                            f"p(B{j}={x:+d},b={m},a={k}) == p(B{j}={x:+d},b={m})*p(a={k})",
                            probability(space, own & setting_is("A", k)),
                            p_own * space.settings.prob_a(k),
                            tolerance,
                        )
                    )
    return _finish("remote-setting-independence", lines)


def detection_factorizations(
    space: SampleSpace, *, tolerance: float = DEFAULT_TOLERANCE
) -> LocalityReport:
    """Do detection/nondetection events on the two sides factorize?

    Checks, for every (i, j): joint nondetection equals the product of
    one-side nondetections and equals the non-selection weight; and each
    mixed detection/nondetection pair factorizes. These follow from the two
    independence conditions; when setting independence already fails the
    report is annotated accordingly.
    """
    note = None
    if not setting_independence(space, tolerance=tolerance).passed:
        note = "conditional-on-locality-failure: setting generators are not independent"

    lines: list[IdentityLine] = []
    for i in SETTINGS:
        for j in SETTINGS:
            a0 = observable_is(_OBS[("A", i)], 0)
            b0 = observable_is(_OBS[("B", j)], 0)
            p_a0 = probability(space, a0)
            p_b0 = probability(space, b0)
            lines.append(
                _line(
                    f"p(A{i}=0,B{j}=0) == p(A{i}=0)*p(B{j}=0)",
                    probability(space, a0 & b0),
                    p_a0 * p_b0,
                    tolerance,
                )
            )
            lines.append(
                _line(
                    f"p(A{i}=0,B{j}=0) == p(a!={i},b!={j})",
                    probability(space, a0 & b0),
                    probability(space, setting_is_not("A", i) & setting_is_not("B", j)),
                    tolerance,
                )
            )
            for eps in OUTCOMES:
                ae = observable_is(_OBS[("A", i)], eps)
                lines.append(
                    _line(
                        f"p(A{i}={eps:+d},B{j}=0) == p(A{i}={eps:+d})*p(B{j}=0)",
                        probability(space, ae & b0),
                        probability(space, ae) * p_b0,
                        tolerance,
                    )
                )
            for eps_prime in OUTCOMES:
                be = observable_is(_OBS[("B", j)], eps_prime)
                lines.append(
                    _line(
                        f"p(A{i}=0,B{j}={eps_prime:+d}) == p(A{i}=0)*p(B{j}={eps_prime:+d})",
                        probability(space, a0 & be),
                        p_a0 * probability(space, be),
                        tolerance,
                    )
                )
    return _finish("detection-factorizations", lines, note)


def marginal_consistency(
    space: SampleSpace, *, tolerance: float = DEFAULT_TOLERANCE
) -> LocalityReport:
    """Absolute marginal consistency plus the one-side conditioning reductions.

    The absolute part -- p(A_i=x) equals the sum over the far observable's
    values of the pair probabilities -- is an identity of any measure and must
    always pass. The reduction lines -- conditioning on the far setting (or on
    both settings) changes nothing for a single observable -- hold exactly
    when remote-setting independence does; they are reported with deviations
    either way, not-applicable where the conditioning event is null.
    """
    lines: list[IdentityLine] = []
    for i in SETTINGS:
        for x in _VALUES:
            ev = observable_is(_OBS[("A", i)], x)
            p_abs = probability(space, ev)
            for j in SETTINGS:
                lines.append(
                    _line(
                        f"p(A{i}={x:+d}) == sum_y p(A{i}={x:+d},B{j}=y)",
                        p_abs,
                        sum(probability(space, ev & observable_is(_OBS[("B", j)], y)) for y in _VALUES),
                        tolerance,
                    )
                )
    for j in SETTINGS:
        for y in _VALUES:
            ev = observable_is(_OBS[("B", j)], y)
            p_abs = probability(space, ev)
            for i in SETTINGS:
                lines.append(
                    _line(
                        f"p(B{j}={y:+d}) == sum_x p(A{i}=x,B{j}={y:+d})",
                        p_abs,
                        sum(probability(space, observable_is(_OBS[("A", i)], x) & ev) for x in _VALUES),
                        tolerance,
                    )
                )

    reductions: list[IdentityLine] = []
    for i in SETTINGS:
        for x in _VALUES:
            ev = observable_is(_OBS[("A", i)], x)
            for m in SETTINGS:
                name = f"p(A{i}={x:+d}|b={m}) == p(A{i}={x:+d})"
                p_b = space.settings.prob_b(m)
                if p_b <= tolerance:
                    reductions.append(IdentityLine(name, None, None, None, NOT_APPLICABLE))
                else:
                    reductions.append(
                        _line(
                            name,
                            probability(space, ev & setting_is("B", m)) / p_b,
                            probability(space, ev),
                            tolerance,
                        )
                    )
            for k in SETTINGS:
                p_k = space.settings.prob_a(k)
                for m in SETTINGS:
                    name = f"p(A{i}={x:+d}|a={k},b={m}) == p(A{i}={x:+d}|a={k})"
                    w = space.settings.weight(k, m)
                    if w <= tolerance or p_k <= tolerance:
                        reductions.append(IdentityLine(name, None, None, None, NOT_APPLICABLE))
                        continue
                    reductions.append(
                        _line(
                            name,
                            probability(space, ev & setting_is("A", k) & setting_is("B", m)) / w,
                            probability(space, ev & setting_is("A", k)) / p_k,
                            tolerance,
                        )
                    )
    report = _finish("marginal-consistency", lines + reductions)
    # the verdict covers the unconditional (always-true) identities; the
    # reduction lines carry their own statuses for callers that need them
    absolute_pass = all(line.status != FAIL for line in lines)
    reductions_pass = all(line.status != FAIL for line in reductions)
    note = None if reductions_pass else "one-side conditioning reductions fail (remote-setting dependence)"
    return LocalityReport(report.name, absolute_pass, report.max_deviation, report.lines, note)


@dataclass(frozen=True)
class ConditionalConsistencyReport:
    """No-signaling verdict for the conditional (setting-pair) tables.

    ``max_deviation`` is the largest cross-block disagreement of a one-side
    outcome marginal (the table's signaling deviation); ``lines`` additionally
    compare each block marginal against the one-side conditional law.
    """

    passed: bool
    max_deviation: float
    lines: tuple[IdentityLine, ...]

    def failures(self) -> list[IdentityLine]:
        return [line for line in self.lines if line.status == FAIL]


def conditional_marginal_consistency(
    space: SampleSpace, *, tolerance: float = DEFAULT_TOLERANCE
) -> ConditionalConsistencyReport:
    """Does each one-side conditional law match every pair-conditional block?

    Requires all four setting pairs to carry positive weight (the one-side
    conditionals are otherwise undefined); raises
    :class:`NullConditioningError` when they do not. Passes whenever
    remote-setting independence holds; a failure quantifies signaling in the
    conditional data.
    """
    for i in SETTINGS:
        for j in SETTINGS:
            if space.settings.weight(i, j) <= tolerance:
                raise NullConditioningError(
                    f"setting pair ({i},{j}) has zero probability; conditional marginals undefined"
                )

    lines: list[IdentityLine] = []
    for i in SETTINGS:
        for eps in OUTCOMES:
            one_side = conditional_one_side(space, "A", i, eps)
            for j in SETTINGS:
                lines.append(
                    _line(
                        f"p(A{i}={eps:+d}|a={i}) == sum_eps' p(A{i}={eps:+d},B{j}=eps'|a={i},b={j})",
                        one_side,
                        _block_a_marginal(space, i, j, eps),
                        tolerance,
                    )
                )
    for j in SETTINGS:
        for eps_prime in OUTCOMES:
            one_side = conditional_one_side(space, "B", j, eps_prime)
            for i in SETTINGS:
                lines.append(
                    _line(
                        f"p(B{j}={eps_prime:+d}|b={j}) == sum_eps p(A{i}=eps,B{j}={eps_prime:+d}|a={i},b={j})",
                        one_side,
                        _block_b_marginal(space, i, j, eps_prime),
                        tolerance,
                    )
                )

    signaling = space.table.signaling_deviation()
    return ConditionalConsistencyReport(
        passed=signaling <= tolerance,
        max_deviation=signaling,
        lines=tuple(lines),
    )


def conditional_one_side(space: SampleSpace, side: str, k: int, eps: int) -> float:
    """One-side conditional outcome law p(X_k=eps | own generator = k)."""
    ev = observable_is(_OBS[(side, k)], eps)
    given = setting_is(side, k)
    denom = probability(space, given)
    if denom <= 0.0:
        gen = "a" if side == "A" else "b"
        raise NullConditioningError(f"p({gen}={k}) = 0")
    return probability(space, ev & given) / denom


def _block_a_marginal(space: SampleSpace, i: int, j: int, eps: int) -> float:
    """A-side outcome marginal of the (i, j) pair-conditional distribution,
    computed from the space (equals the table's block marginal by the basic
    conditional-probability identity)."""
    w = space.settings.weight(i, j)
    ev = observable_is(_OBS[("A", i)], eps) & setting_is("A", i) & setting_is("B", j)
    return probability(space, ev) / w


def _block_b_marginal(space: SampleSpace, i: int, j: int, eps_prime: int) -> float:
    w = space.settings.weight(i, j)
    ev = observable_is(_OBS[("B", j)], eps_prime) & setting_is("A", i) & setting_is("B", j)
    return probability(space, ev) / w
