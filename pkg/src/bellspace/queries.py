"""Exact probability queries on a sample space.

Everything here is computed by enumerating the 16 atoms; no closed form is
trusted. The closed-form identities relating absolute probabilities (which
include setting randomness) to conditional probabilities (which do not) are
then verified against enumeration by :func:`nondetection_identities` and
:func:`detection_identities`, and the zero-measure property of same-side
outcome combinations by :func:`counterfactual_mass`.

Events are conjunctions of atomic clauses; disjunctions are left to the caller
via additivity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator

from .errors import NullConditioningError
from .space import (
    DEFAULT_TOLERANCE,
    OUTCOMES,
    SETTINGS,
    A1,
    A2,
    B1,
    B2,
    Atom,
    ObservableId,
    SampleSpace,
    eval_generator,
)


@dataclass(frozen=True)
class _Clause:
    """One atomic condition: an observable value, or a setting (not) equal to k."""

    kind: str  # "obs" | "set_eq" | "set_ne"
    subject: ObservableId | str
    value: int

    def holds(self, atom: Atom) -> bool:
        if self.kind == "obs":
            return self.subject.value_on(atom) == self.value
        selected = eval_generator(self.subject, atom)
        return (selected == self.value) if self.kind == "set_eq" else (selected != self.value)

    def __str__(self) -> str:
        if self.kind == "obs":
            return f"{self.subject}={self.value:+d}" if self.value else f"{self.subject}=0"
        gen = "a" if self.subject == "A" else "b"
        op = "=" if self.kind == "set_eq" else "!="
        return f"{gen}{op}{self.value}"


@dataclass(frozen=True)
class EventPredicate:
    """A conjunction of clauses. The empty conjunction is the whole space;
    contradictory clause sets are legal and denote the empty event."""

    clauses: tuple[_Clause, ...] = ()

    def __and__(self, other: "EventPredicate") -> "EventPredicate":
        return EventPredicate(self.clauses + other.clauses)

    def holds(self, atom: Atom) -> bool:
        return all(c.holds(atom) for c in self.clauses)

    def __str__(self) -> str:
        return ", ".join(str(c) for c in self.clauses) if self.clauses else "(whole space)"


#: The certain event.
ALWAYS = EventPredicate()


def observable_is(obs: ObservableId, value: int) -> EventPredicate:
    """Event {obs = value} for value in {-1, 0, +1}."""
    if value not in (-1, 0, 1):
        raise ValueError(f"observable value must be -1, 0 or +1, got {value!r}")
    return EventPredicate((_Clause("obs", obs, value),))


def setting_is(side: str, k: int) -> EventPredicate:
    """Event {side's generator selected setting k}."""
    return EventPredicate((_Clause("set_eq", side, k),))


def setting_is_not(side: str, k: int) -> EventPredicate:
    """Event {side's generator did not select setting k}."""
    return EventPredicate((_Clause("set_ne", side, k),))


def probability(space: SampleSpace, event: EventPredicate) -> float:
    """Absolute probability of an event: sum of p(atom) over atoms where it holds."""
    return float(sum(p for atom, p in space.atoms() if event.holds(atom)))


def conditional_probability(
    space: SampleSpace,
    event: EventPredicate,
    given: EventPredicate,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
) -> float:
    """prob(event and given) / prob(given).

    Raises :class:`NullConditioningError` when the conditioning event has zero
    probability (within tolerance); no convention value is returned.
    """
    denom = probability(space, given)
    if denom <= tolerance:
        raise NullConditioningError(f"conditioning event has probability {denom!r}: {given}")
    return probability(space, event & given) / denom


# ---------------------------------------------------------------------------
# Identity reports
# ---------------------------------------------------------------------------

PASS = "pass"
FAIL = "fail"
NOT_APPLICABLE = "not-applicable"


@dataclass(frozen=True)
class IdentityLine:
    """One checked identity: name, both sides, their deviation, and a status.

    Lines whose conditioning event is null are reported as not-applicable and
    carry no numbers.
    """

    name: str
    lhs: float | None
    rhs: float | None
    deviation: float | None
    status: str


@dataclass(frozen=True)
class IdentityReport:
    lines: tuple[IdentityLine, ...]
    tolerance: float

    @property
    def passed(self) -> bool:
        return all(line.status != FAIL for line in self.lines)

    @property
    def max_deviation(self) -> float:
        devs = [line.deviation for line in self.lines if line.deviation is not None]
        return max(devs) if devs else 0.0

    def failures(self) -> list[IdentityLine]:
        return [line for line in self.lines if line.status == FAIL]

    def not_applicable(self) -> list[IdentityLine]:
        return [line for line in self.lines if line.status == NOT_APPLICABLE]


def _line(name: str, lhs: float, rhs: float, tolerance: float) -> IdentityLine:
    dev = abs(lhs - rhs)
    return IdentityLine(name, lhs, rhs, dev, PASS if dev <= tolerance else FAIL)


def _na(name: str) -> IdentityLine:
    return IdentityLine(name, None, None, None, NOT_APPLICABLE)


def nondetection_identities(
    space: SampleSpace, *, tolerance: float = DEFAULT_TOLERANCE
) -> IdentityReport:
    """Check the identities tying nondetection (value 0) to setting non-selection.

    Per side and setting pair: the absolute nondetection probability equals
    the non-selection probability; joint nondetection factors through the
    non-selection event; and conditioned on joint nondetection, the setting
    pair was certainly not selected. Mixed detection/nondetection forms are
    checked as well. Lines conditioning on a null event are not-applicable.
    """
    lines: list[IdentityLine] = []
    obs_a = {1: A1, 2: A2}
    obs_b = {1: B1, 2: B2}

    for i in SETTINGS:
        lines.append(
            _line(
                f"p(A{i}=0) == p(a!={i})",
                probability(space, observable_is(obs_a[i], 0)),
                probability(space, setting_is_not("A", i)),
                tolerance,
            )
        )
    for j in SETTINGS:
        lines.append(
            _line(
                f"p(B{j}=0) == p(b!={j})",
                probability(space, observable_is(obs_b[j], 0)),
                probability(space, setting_is_not("B", j)),
                tolerance,
            )
        )

    for i in SETTINGS:
        for j in SETTINGS:
            both_zero = observable_is(obs_a[i], 0) & observable_is(obs_b[j], 0)
            not_sel = setting_is_not("A", i) & setting_is_not("B", j)
            p_not_sel = probability(space, not_sel)

            name = (
                f"p(A{i}=0,B{j}=0) == p(A{i}=0,B{j}=0|a!={i},b!={j})*p(a!={i},b!={j})"
            )
            if p_not_sel <= tolerance:
                lines.append(_na(name))
            else:
                lines.append(
                    _line(
                        name,
                        probability(space, both_zero),
                        conditional_probability(space, both_zero, not_sel, tolerance=tolerance)
                        * p_not_sel,
                        tolerance,
                    )
                )

            name = f"p(a!={i},b!={j}|A{i}=0,B{j}=0) == 1"
            if probability(space, both_zero) <= tolerance:
                lines.append(_na(name))
            else:
                lines.append(
                    _line(
                        name,
                        conditional_probability(space, not_sel, both_zero, tolerance=tolerance),
                        1.0,
                        tolerance,
                    )
                )

            for eps in OUTCOMES:
                name = (
                    f"p(A{i}={eps:+d},B{j}=0) == "
                    f"p(A{i}={eps:+d},B{j}=0|a={i},b!={j})*p(a={i},b!={j})"
                )
                mixed = observable_is(obs_a[i], eps) & observable_is(obs_b[j], 0)
                sel = setting_is("A", i) & setting_is_not("B", j)
                p_sel = probability(space, sel)
                if p_sel <= tolerance:
                    lines.append(_na(name))
                else:
                    lines.append(
                        _line(
                            name,
                            probability(space, mixed),
                            conditional_probability(space, mixed, sel, tolerance=tolerance) * p_sel,
                            tolerance,
                        )
                    )

            for eps_prime in OUTCOMES:
                name = (
                    f"p(A{i}=0,B{j}={eps_prime:+d}) == "
                    f"p(A{i}=0,B{j}={eps_prime:+d}|a!={i},b={j})*p(a!={i},b={j})"
                )
                mixed = observable_is(obs_a[i], 0) & observable_is(obs_b[j], eps_prime)
                sel = setting_is_not("A", i) & setting_is("B", j)
                p_sel = probability(space, sel)
                if p_sel <= tolerance:
                    lines.append(_na(name))
                else:
                    lines.append(
                        _line(
                            name,
                            probability(space, mixed),
                            conditional_probability(space, mixed, sel, tolerance=tolerance) * p_sel,
                            tolerance,
                        )
                    )

    return IdentityReport(tuple(lines), tolerance)


def detection_identities(
    space: SampleSpace, *, tolerance: float = DEFAULT_TOLERANCE
) -> IdentityReport:
    """Check the detection-side chain linking absolute and conditional laws.

    Single observables: p(X_k=eps) equals p(setting selected) times the
    conditional; pairs: the conditional pair law equals the absolute pair law
    divided by the setting weight, and reproduces the input table entry.
    """
    lines: list[IdentityLine] = []
    obs = {("A", 1): A1, ("A", 2): A2, ("B", 1): B1, ("B", 2): B2}

    for side in ("A", "B"):
        gen = "a" if side == "A" else "b"
        prob_side = space.settings.prob_a if side == "A" else space.settings.prob_b
        for k in SETTINGS:
            p_sel = prob_side(k)
            for eps in OUTCOMES:
                x = obs[(side, k)]
                abs_p = probability(space, observable_is(x, eps))
                name = (
                    f"p({side}{k}={eps:+d}) == p({gen}={k})*p({side}{k}={eps:+d}|{gen}={k})"
                )
                if p_sel <= tolerance:
                    lines.append(_na(name))
                    lines.append(_na(f"p({side}{k}={eps:+d}|{gen}={k}) == p({side}{k}={eps:+d})/p({gen}={k})"))
                    continue
                cond = conditional_probability(
                    space, observable_is(x, eps), setting_is(side, k), tolerance=tolerance
                )
                lines.append(_line(name, abs_p, p_sel * cond, tolerance))
                lines.append(
                    _line(
                        f"p({side}{k}={eps:+d}|{gen}={k}) == p({side}{k}={eps:+d})/p({gen}={k})",
                        cond,
                        abs_p / p_sel,
                        tolerance,
                    )
                )

    for i in SETTINGS:
        for j in SETTINGS:
            w = space.settings.weight(i, j)
            pair_sel = setting_is("A", i) & setting_is("B", j)
            for eps in OUTCOMES:
                for eps_prime in OUTCOMES:
                    pair = observable_is(obs[("A", i)], eps) & observable_is(obs[("B", j)], eps_prime)
                    ratio_name = (
                        f"p(A{i}={eps:+d},B{j}={eps_prime:+d}|a={i},b={j}) == "
                        f"p(A{i}={eps:+d},B{j}={eps_prime:+d})/p(a={i},b={j})"
                    )
                    table_name = (
                        f"p(A{i}={eps:+d},B{j}={eps_prime:+d}|a={i},b={j}) == "
                        f"q({eps:+d},{eps_prime:+d}|{i},{j})"
                    )
                    if w <= tolerance:
                        lines.append(_na(ratio_name))
                        lines.append(_na(table_name))
                        continue
                    cond = conditional_probability(space, pair, pair_sel, tolerance=tolerance)
                    lines.append(_line(ratio_name, cond, probability(space, pair) / w, tolerance))
                    lines.append(
                        _line(table_name, cond, space.table.prob(i, j, eps, eps_prime), tolerance)
                    )

    return IdentityReport(tuple(lines), tolerance)


# ---------------------------------------------------------------------------
# Counterfactual events
# ---------------------------------------------------------------------------


def counterfactual_events() -> Iterator[EventPredicate]:
    """All events assigning nonzero values to two same-side observables.

    Covers the same-side pairs {A1=e1, A2=e2}, {B1=e1', B2=e2'} and every
    quadruple assignment {A1=x1, A2=x2, B1=y1, B2=y2} (values in {-1, 0, +1})
    in which at least one side has both observables nonzero.
    """
    for e1, e2 in itertools.product(OUTCOMES, repeat=2):
        yield observable_is(A1, e1) & observable_is(A2, e2)
        yield observable_is(B1, e1) & observable_is(B2, e2)
    for x1, x2, y1, y2 in itertools.product((-1, 0, 1), repeat=4):
        if x1 * x2 != 0 or y1 * y2 != 0:
            yield (
                observable_is(A1, x1)
                & observable_is(A2, x2)
                & observable_is(B1, y1)
                & observable_is(B2, y2)
            )


def counterfactual_mass(space: SampleSpace) -> float:
    """Largest probability over all counterfactual events.

    Structurally zero: no atom gives nonzero values to both observables of one
    side, so every such event is empty and the maximum is exactly 0.0.
    """
    return max(probability(space, event) for event in counterfactual_events())
