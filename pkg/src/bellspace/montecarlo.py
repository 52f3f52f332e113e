"""Seeded trial-by-trial simulation and empirical estimation.

Sampling draws one uniform per trial and inverts the cumulative distribution
over the 16 atoms, so a trial's record is a pure function of (seed, trial
index). The generator is counter-based (numpy's Philox, 4 x 64-bit words per
counter block), which makes sharding exact: shard boundaries are aligned to
whole counter blocks and each shard fast-forwards to its block, so the
concatenated stream is bit-identical for every shard count. ``RNG_ALGORITHM``
names the scheme for output metadata.

The estimators are plain frequency counts: setting weights from cell counts,
conditional blocks from within-cell outcome counts (undefined for empty
cells), and correlations from the blocks.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .chsh import CorrelationSet, chsh_combination
from .errors import EmptyStreamError, InvalidDistributionError
from .space import (
    SETTINGS,
    ConditionalTable,
    SampleSpace,
    SettingDistribution,
)

#: RNG scheme identifier recorded in simulation metadata.
RNG_ALGORITHM = "philox4x64/counter-block-sharded/inverse-cdf"

#: Uniform draws per Philox counter block; shard boundaries snap to this.
_BLOCK = 4


@dataclass(frozen=True)
class EventRecord:
    """One simulated trial: selected settings and all four observable values
    (0 marks the non-selected observable on each side)."""

    trial: int
    a: int
    b: int
    A1: int
    A2: int
    B1: int
    B2: int


@dataclass(frozen=True)
class FrequencyEstimate:
    """A frequency with its binomial standard error."""

    value: float
    stderr: float
    n: int

    @classmethod
    def of(cls, count: int, n: int) -> "FrequencyEstimate":
        p = count / n
        return cls(value=p, stderr=math.sqrt(p * (1.0 - p) / n), n=n)


@dataclass(frozen=True)
class Trials:
    """Columnar batch of event records (efficient for large n); iterates as
    :class:`EventRecord` objects in trial order."""

    trial: np.ndarray
    a: np.ndarray
    b: np.ndarray
    A1: np.ndarray
    A2: np.ndarray
    B1: np.ndarray
    B2: np.ndarray
    seed: int | None = None
    rng_algorithm: str | None = None

    def __len__(self) -> int:
        return int(self.trial.shape[0])

    def __iter__(self) -> Iterator[EventRecord]:
        for k in range(len(self)):
            yield self.record(k)

    def record(self, k: int) -> EventRecord:
        return EventRecord(
            trial=int(self.trial[k]),
            a=int(self.a[k]),
            b=int(self.b[k]),
            A1=int(self.A1[k]),
            A2=int(self.A2[k]),
            B1=int(self.B1[k]),
            B2=int(self.B2[k]),
        )

    @classmethod
    def from_records(cls, records: Iterable[EventRecord]) -> "Trials":
        rows = list(records)
        return cls(
            trial=np.array([r.trial for r in rows], dtype=np.int64),
            a=np.array([r.a for r in rows], dtype=np.int8),
            b=np.array([r.b for r in rows], dtype=np.int8),
            A1=np.array([r.A1 for r in rows], dtype=np.int8),
            A2=np.array([r.A2 for r in rows], dtype=np.int8),
            B1=np.array([r.B1 for r in rows], dtype=np.int8),
            B2=np.array([r.B2 for r in rows], dtype=np.int8),
        )


def _shard_bounds(n: int, shards: int) -> list[tuple[int, int]]:
    """Split [0, n) into contiguous shard ranges whose starts are multiples of
    the Philox block size, so each shard can fast-forward exactly."""
    raw = [n * s // shards for s in range(shards + 1)]
    snapped = [min(n, _BLOCK * ((v + _BLOCK - 1) // _BLOCK)) for v in raw]
    snapped[0], snapped[-1] = 0, n
    return [(snapped[s], snapped[s + 1]) for s in range(shards) if snapped[s + 1] > snapped[s]]


def _uniforms(seed: int, lo: int, hi: int) -> np.ndarray:
    """Stream positions [lo, hi) of the trial-uniform sequence for a seed.
    ``lo`` must be a multiple of the counter block size."""
    bitgen = np.random.Philox(key=seed)
    if lo:
        bitgen.advance(lo // _BLOCK)
    return np.random.Generator(bitgen).random(hi - lo)


def sample_trials(space: SampleSpace, n: int, seed: int, *, shards: int = 1) -> Trials:
    """Draw n independent trials from the space's atom distribution.

    Deterministic in (space, n, seed); the shard count changes only how the
    work is partitioned, never the stream. Each record satisfies the
    structural trial invariant: exactly the selected observable on each side
    is nonzero.
    """
    if n < 0:
        raise InvalidDistributionError(f"n must be >= 0, got {n}")
    if shards < 1:
        raise InvalidDistributionError(f"shards must be >= 1, got {shards}")
    if not 0 <= seed < 2**128:
        raise InvalidDistributionError(f"seed must be in [0, 2**128), got {seed}")

    cdf = np.cumsum(space.probs.reshape(-1))
    parts = []
    for lo, hi in _shard_bounds(n, shards):
        u = _uniforms(seed, lo, hi)
        # guard the half-open inversion against u == total mass exactly
        idx = np.minimum(np.searchsorted(cdf, u, side="right"), 15)
        parts.append(idx)
    atom_idx = np.concatenate(parts) if parts else np.empty(0, dtype=np.int64)

    i, j, e, ep = np.unravel_index(atom_idx, (2, 2, 2, 2))
    a = (i + 1).astype(np.int8)
    b = (j + 1).astype(np.int8)
    eps = np.where(e == 0, 1, -1).astype(np.int8)
    eps_prime = np.where(ep == 0, 1, -1).astype(np.int8)
    zero = np.zeros(n, dtype=np.int8)
    return Trials(
        trial=np.arange(n, dtype=np.int64),
        a=a,
        b=b,
        A1=np.where(a == 1, eps, zero),
        A2=np.where(a == 2, eps, zero),
        B1=np.where(b == 1, eps_prime, zero),
        B2=np.where(b == 2, eps_prime, zero),
        seed=seed,
        rng_algorithm=RNG_ALGORITHM,
    )


@dataclass(frozen=True)
class EmpiricalEstimate:
    """Frequency estimates of the setting distribution, conditional blocks and
    correlations. Blocks and conditional correlations of empty setting cells
    are NaN and listed by :meth:`undefined_pairs`."""

    n: int
    cell_counts: np.ndarray  # (2, 2) trials per setting pair
    atom_counts: np.ndarray  # (2, 2, 2, 2)
    settings: SettingDistribution
    block_frequencies: np.ndarray  # (2, 2, 2, 2), NaN rows for empty cells
    correlations: CorrelationSet

    def defined(self, i: int, j: int) -> bool:
        return bool(self.cell_counts[i - 1, j - 1] > 0)

    def undefined_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i in SETTINGS for j in SETTINGS if not self.defined(i, j)]

    def table(self, *, fill_undefined: bool = False) -> ConditionalTable | None:
        """Materialize the block frequencies as a conditional table.

        Returns None when some cell is empty, unless ``fill_undefined`` puts
        the uniform block there (harmless for space building: those cells get
        weight zero).
        """
        q = self.block_frequencies.copy()
        nan_cells = np.isnan(q).any(axis=(2, 3))
        if nan_cells.any():
            if not fill_undefined:
                return None
            q[nan_cells] = 0.25
        return ConditionalTable.from_blocks(q)

    def setting_estimate(self, i: int, j: int) -> FrequencyEstimate:
        return FrequencyEstimate.of(int(self.cell_counts[i - 1, j - 1]), self.n)


def estimate(records: "Trials | Iterable[EventRecord]") -> EmpiricalEstimate:
    """Empirical counterpart of the space: frequencies in place of exact laws.

    Raises :class:`EmptyStreamError` on an empty stream and
    :class:`InvalidDistributionError` on a record violating the structural
    trial invariant (selected observables nonzero, the others zero).
    """
    trials = records if isinstance(records, Trials) else Trials.from_records(records)
    n = len(trials)
    if n == 0:
        raise EmptyStreamError("cannot estimate from zero records")

    eps = np.where(trials.a == 1, trials.A1, trials.A2).astype(np.int64)
    eps_prime = np.where(trials.b == 1, trials.B1, trials.B2).astype(np.int64)
    off_a = np.where(trials.a == 1, trials.A2, trials.A1)
    off_b = np.where(trials.b == 1, trials.B2, trials.B1)
    if np.any(eps == 0) or np.any(eps_prime == 0) or np.any(off_a != 0) or np.any(off_b != 0):
        bad = int(
            np.argmax((eps == 0) | (eps_prime == 0) | (off_a != 0) | (off_b != 0))
        )
        raise InvalidDistributionError(
            f"record {int(trials.trial[bad])} violates the trial structure: "
            "the selected observable must be nonzero and the other one zero"
        )
    i = trials.a.astype(np.int64) - 1
    j = trials.b.astype(np.int64) - 1
    e = (1 - eps) // 2  # +1 -> 0, -1 -> 1
    ep = (1 - eps_prime) // 2
    flat = ((i * 2 + j) * 2 + e) * 2 + ep
    atom_counts = np.bincount(flat, minlength=16).reshape(2, 2, 2, 2)
    cell_counts = atom_counts.sum(axis=(2, 3))

    weights = cell_counts / n
    settings = SettingDistribution.from_weights(weights)

    with np.errstate(invalid="ignore", divide="ignore"):
        blocks = atom_counts / cell_counts[:, :, None, None]
    blocks[cell_counts == 0] = np.nan

    signs = np.array([[1.0, -1.0], [-1.0, 1.0]])
    q_corr = np.einsum("ijkl,kl->ij", np.nan_to_num(blocks), signs)
    q_corr = np.where(cell_counts > 0, q_corr, np.nan)
    c_corr = np.where(cell_counts > 0, q_corr * weights, 0.0)
    corr = CorrelationSet(absolute=c_corr, conditional=q_corr, weights=weights)

    return EmpiricalEstimate(
        n=n,
        cell_counts=cell_counts,
        atom_counts=atom_counts,
        settings=settings,
        block_frequencies=blocks,
        correlations=corr,
    )


@dataclass(frozen=True)
class ConvergencePoint:
    n: int
    max_abs_deviation: float  # over the 16 atom probabilities


def convergence_report(
    space: SampleSpace, n_list: Sequence[int], seed: int
) -> list[ConvergencePoint]:
    """Empirical-vs-exact atom probabilities at increasing sample sizes.

    Streams share the seed, so smaller runs are prefixes of larger ones;
    deviations should decay like n^(-1/2).
    """
    if not n_list:
        raise EmptyStreamError("n_list must be nonempty")
    exact = space.probs.reshape(-1)
    points = []
    for n in n_list:
        trials = sample_trials(space, n, seed)
        freq = estimate(trials).atom_counts.reshape(-1) / n
        points.append(ConvergencePoint(n=n, max_abs_deviation=float(np.abs(freq - exact).max())))
    return points


def empirical_chsh(est: EmpiricalEstimate) -> tuple[float, float | None]:
    """(S_abs, S_cond) from empirical correlations; S_cond None if any cell is empty."""
    s_abs = chsh_combination(est.correlations.absolute)
    s_cond = chsh_combination(est.correlations.conditional) if est.correlations.all_defined else None
    return s_abs, s_cond
