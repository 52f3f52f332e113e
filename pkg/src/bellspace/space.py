"""Finite classical probability space for a two-device, two-setting experiment.

The experiment: a source emits paired systems; an A-device and a B-device each
measure one of two dichotomic (+1/-1) observables per trial. Which observable
fires on each side is chosen by a local setting generator (values 1 or 2).
An observable whose setting was not selected reports the nondetection value 0.

The sample space has exactly 16 atoms ``(i, j, eps, eps_prime)``: the selected
setting pair and the two +-1 outcomes. Every other combination of the six
random variables (A1, A2, B1, B2 and the two generators) is forced to
probability zero by the model's two structural conditions:

* no random background -- a non-selected observable never clicks, and
* perfect detectors   -- the selected observable always clicks.

Zero outcomes are therefore not stored; they are reconstructed functionally by
:func:`eval_observable`. An atom's probability is the product of the setting
weight ``p(a=i, b=j)`` and the conditional outcome probability
``q(eps, eps_prime | i, j)``.

Probabilities are double precision; validation uses an absolute tolerance
(default ``DEFAULT_TOLERANCE``). All types are frozen and safe to share
across threads.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence

import numpy as np

from .errors import InvalidDistributionError

#: Absolute tolerance for validating that probabilities are nonnegative and
#: normalized. Exact identities in reports are checked against tighter values.
DEFAULT_TOLERANCE = 1e-9

#: Setting labels on each side.
SETTINGS = (1, 2)

#: Outcome sign order used for all 2x2 outcome blocks: index 0 is +1, 1 is -1.
OUTCOMES = (1, -1)

_OUTCOME_INDEX = {1: 0, -1: 1}
_SIDES = ("A", "B")


def outcome_index(value: int) -> int:
    """Array index (0 or 1) of a +-1 outcome value."""
    try:
        return _OUTCOME_INDEX[value]
    except KeyError:
        raise InvalidDistributionError(f"outcome must be +1 or -1, got {value!r}") from None


def _require_side(side: str) -> str:
    if side not in _SIDES:
        raise InvalidDistributionError(f"side must be 'A' or 'B', got {side!r}")
    return side


def _require_setting(k: int, name: str) -> int:
    if k not in SETTINGS:
        raise InvalidDistributionError(f"{name} must be 1 or 2, got {k!r}")
    return k


def _as_prob_array(values, shape: tuple[int, ...], what: str, tolerance: float) -> np.ndarray:
    """Coerce to a float array of the given shape with nonnegative entries.

    Tiny negative excursions (within tolerance) are clipped to exact zero so
    that structural zeros stay exact; upper bounds follow from the callers'
    normalization checks.
    """
    arr = np.asarray(values, dtype=float)
    if arr.shape != shape:
        raise InvalidDistributionError(f"{what} must have shape {shape}, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InvalidDistributionError(f"{what} contains a non-finite entry")
    if np.any(arr < -tolerance):
        raise InvalidDistributionError(f"{what} contains a negative entry: min={arr.min()}")
    arr = np.where(arr < 0.0, 0.0, arr)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class ObservableId:
    """One of the four observables: side 'A' or 'B', setting index 1 or 2."""

    side: str
    index: int

    def __post_init__(self) -> None:
        _require_side(self.side)
        _require_setting(self.index, "index")

    def value_on(self, atom: "Atom") -> int:
        """Value of this observable on an atom: the recorded sign if the
        matching setting was selected, else the nondetection value 0."""
        if self.side == "A":
            return atom.eps if atom.i == self.index else 0
        return atom.eps_prime if atom.j == self.index else 0

    def __str__(self) -> str:
        return f"{self.side}{self.index}"


A1 = ObservableId("A", 1)
A2 = ObservableId("A", 2)
B1 = ObservableId("B", 1)
B2 = ObservableId("B", 2)

OBSERVABLES = (A1, A2, B1, B2)


@dataclass(frozen=True)
class Atom:
    """Sample-space atom: selected settings (i, j) plus both +-1 outcomes."""

    i: int
    j: int
    eps: int
    eps_prime: int

    def __post_init__(self) -> None:
        _require_setting(self.i, "i")
        _require_setting(self.j, "j")
        outcome_index(self.eps)
        outcome_index(self.eps_prime)

    def __str__(self) -> str:
        return f"({self.i},{self.j},{self.eps:+d},{self.eps_prime:+d})"


#: The 16 atoms in canonical order (i, j, eps, eps'), +1 before -1.
ALL_ATOMS: tuple[Atom, ...] = tuple(
    Atom(i, j, e, ep) for i in SETTINGS for j in SETTINGS for e in OUTCOMES for ep in OUTCOMES
)


@dataclass(frozen=True)
class SettingDistribution:
    """Joint law of the two setting generators: ``weights[i-1, j-1] = p(a=i, b=j)``."""

    weights: np.ndarray

    @classmethod
    def from_weights(cls, weights, *, tolerance: float = DEFAULT_TOLERANCE) -> "SettingDistribution":
        arr = _as_prob_array(weights, (2, 2), "setting weights", tolerance)
        total = float(arr.sum())
        if abs(total - 1.0) > tolerance:
            raise InvalidDistributionError(f"setting weights must sum to 1, got {total!r}")
        return cls(arr)

    @classmethod
    def from_marginals(cls, a, b, *, tolerance: float = DEFAULT_TOLERANCE) -> "SettingDistribution":
        """Product distribution built from per-side marginals (independent generators)."""
        pa = _as_prob_array(a, (2,), "a-marginal", tolerance)
        pb = _as_prob_array(b, (2,), "b-marginal", tolerance)
        for name, m in (("a-marginal", pa), ("b-marginal", pb)):
            if abs(float(m.sum()) - 1.0) > tolerance:
                raise InvalidDistributionError(f"{name} must sum to 1, got {float(m.sum())!r}")
        return cls.from_weights(np.outer(pa, pb), tolerance=tolerance)

    @classmethod
    def uniform(cls) -> "SettingDistribution":
        return cls.from_weights(np.full((2, 2), 0.25))

    @classmethod
    def concentrated(cls, i: int, j: int) -> "SettingDistribution":
        """All weight on one setting pair."""
        w = np.zeros((2, 2))
        w[_require_setting(i, "i") - 1, _require_setting(j, "j") - 1] = 1.0
        return cls.from_weights(w)

    def weight(self, i: int, j: int) -> float:
        return float(self.weights[i - 1, j - 1])

    def prob_a(self, i: int) -> float:
        """Marginal p(a=i)."""
        return float(self.weights[i - 1, :].sum())

    def prob_b(self, j: int) -> float:
        """Marginal p(b=j)."""
        return float(self.weights[:, j - 1].sum())

    def validate(self, *, tolerance: float = DEFAULT_TOLERANCE) -> None:
        """Re-check the invariants (for instances built without the factories)."""
        w = np.asarray(self.weights, dtype=float)
        if w.shape != (2, 2) or not np.all(np.isfinite(w)) or np.any(w < 0.0):
            raise InvalidDistributionError(f"setting weights invalid: {self.weights!r}")
        if abs(float(w.sum()) - 1.0) > tolerance:
            raise InvalidDistributionError(f"setting weights sum to {float(w.sum())!r}")


@dataclass(frozen=True)
class ConditionalTable:
    """The four conditional outcome laws ``q[i-1, j-1, e, e'] = q(eps, eps' | i, j)``.

    Outcome axes follow :data:`OUTCOMES` (index 0 is +1). Each (i, j) block is
    a probability distribution on the four sign pairs.
    """

    q: np.ndarray

    @classmethod
    def from_blocks(
        cls,
        blocks: Mapping[tuple[int, int], object] | Sequence,
        *,
        tolerance: float = DEFAULT_TOLERANCE,
    ) -> "ConditionalTable":
        """Build from a ``{(i, j): block}`` mapping or a full (2,2,2,2) array.

        A block may be a 2x2 array ``[[q(+,+), q(+,-)], [q(-,+), q(-,-)]]`` or
        the flat length-4 sequence in the same order.
        """
        if isinstance(blocks, Mapping):
            arr = np.empty((2, 2, 2, 2))
            for i in SETTINGS:
                for j in SETTINGS:
                    if (i, j) not in blocks:
                        raise InvalidDistributionError(f"missing conditional block ({i},{j})")
                    block = np.asarray(blocks[(i, j)], dtype=float)
                    if block.shape == (4,):
                        block = block.reshape(2, 2)
                    arr[i - 1, j - 1] = block
        else:
            arr = np.asarray(blocks, dtype=float)
        arr = _as_prob_array(arr, (2, 2, 2, 2), "conditional table", tolerance)
        sums = arr.sum(axis=(2, 3))
        if np.any(np.abs(sums - 1.0) > tolerance):
            bad = np.unravel_index(int(np.argmax(np.abs(sums - 1.0))), (2, 2))
            raise InvalidDistributionError(
                f"conditional block ({bad[0] + 1},{bad[1] + 1}) sums to {sums[bad]!r}, expected 1"
            )
        return cls(arr)

    @classmethod
    def constant(cls, block) -> "ConditionalTable":
        """Same outcome block for every setting pair."""
        b = np.asarray(block, dtype=float).reshape(2, 2)
        return cls.from_blocks(np.broadcast_to(b, (2, 2, 2, 2)).copy())

    def prob(self, i: int, j: int, eps: int, eps_prime: int) -> float:
        """Entry q(eps, eps' | i, j)."""
        return float(self.q[i - 1, j - 1, outcome_index(eps), outcome_index(eps_prime)])

    def block(self, i: int, j: int) -> np.ndarray:
        """Copy of the 2x2 outcome block for setting pair (i, j)."""
        return self.q[i - 1, j - 1].copy()

    def a_marginal(self, i: int, j: int, eps: int) -> float:
        """q(A_i=eps | i, j), the block's A-side outcome marginal."""
        return float(self.q[i - 1, j - 1, outcome_index(eps), :].sum())

    def b_marginal(self, i: int, j: int, eps_prime: int) -> float:
        """q(B_j=eps' | i, j), the block's B-side outcome marginal."""
        return float(self.q[i - 1, j - 1, :, outcome_index(eps_prime)].sum())

    def correlation(self, i: int, j: int) -> float:
        """Conditional correlation of the block: sum of eps*eps' * q(eps, eps' | i, j)."""
        b = self.q[i - 1, j - 1]
        return float(b[0, 0] - b[0, 1] - b[1, 0] + b[1, 1])

    def signaling_deviation(self) -> float:
        """Largest cross-block disagreement of a one-side outcome marginal.

        Zero means the table cannot signal: the A-side marginals do not depend
        on the B-side setting and vice versa.
        """
        a_margs = self.q.sum(axis=3)  # [i, j, eps]
        b_margs = self.q.sum(axis=2)  # [i, j, eps']
        dev_a = float(np.abs(a_margs[:, 0, :] - a_margs[:, 1, :]).max())
        dev_b = float(np.abs(b_margs[0, :, :] - b_margs[1, :, :]).max())
        return max(dev_a, dev_b)

    def validate(self, *, tolerance: float = DEFAULT_TOLERANCE) -> None:
        """Re-check the invariants (for instances built without the factories)."""
        q = np.asarray(self.q, dtype=float)
        if q.shape != (2, 2, 2, 2) or not np.all(np.isfinite(q)) or np.any(q < 0.0):
            raise InvalidDistributionError("conditional table invalid")
        sums = q.sum(axis=(2, 3))
        if np.any(np.abs(sums - 1.0) > tolerance):
            raise InvalidDistributionError(f"conditional block sums are {sums.tolist()!r}")


@dataclass(frozen=True)
class SampleSpace:
    """The finite probability space: 16 atom probabilities plus the inputs
    they were built from. Construct via :func:`build_space`."""

    settings: SettingDistribution
    table: ConditionalTable
    probs: np.ndarray  # (2, 2, 2, 2), axes (i-1, j-1, eps index, eps' index)

    def atom_probability(self, atom: Atom) -> float:
        return float(
            self.probs[atom.i - 1, atom.j - 1, outcome_index(atom.eps), outcome_index(atom.eps_prime)]
        )

    def atoms(self) -> Iterator[tuple[Atom, float]]:
        """All 16 atoms with their probabilities, in canonical order."""
        flat = self.probs.reshape(-1)
        for atom, p in zip(ALL_ATOMS, flat):
            yield atom, float(p)

    def total_probability(self) -> float:
        return float(self.probs.sum())


def build_space(settings: SettingDistribution, table: ConditionalTable) -> SampleSpace:
    """Assemble the 16-atom space: p(i, j, eps, eps') = p(a=i, b=j) * q(eps, eps' | i, j).

    Setting pairs of weight zero contribute four atoms of exactly zero
    probability regardless of the table block.
    """
    settings.validate()
    table.validate()
    probs = settings.weights[:, :, None, None] * table.q
    probs = np.where(settings.weights[:, :, None, None] == 0.0, 0.0, probs)
    probs.flags.writeable = False
    return SampleSpace(settings=settings, table=table, probs=probs)


def eval_observable(obs: ObservableId, atom: Atom) -> int:
    """Value in {-1, 0, +1} of an observable on an atom (0 = not selected)."""
    return obs.value_on(atom)


def eval_generator(side: str, atom: Atom) -> int:
    """Selected setting (1 or 2) of the 'A'- or 'B'-side generator on an atom."""
    return atom.i if _require_side(side) == "A" else atom.j
