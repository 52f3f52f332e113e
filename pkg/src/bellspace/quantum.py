"""Conditional tables predicted by quantum mechanics for entangled photon pairs.

For a maximally entangled polarization pair analyzed by polarizing beam
splitters at angles ``theta_i`` (A side) and ``theta'_j`` (B side), the
outcome law for the setting pair (i, j) is

    q(eps, eps' | i, j) = (1 + eps * eps' * cos 2(theta_i - theta'_j)) / 4,

so the pair correlation is ``cos 2(theta_i - theta'_j)`` and every one-side
marginal is 1/2. This photon convention (correlation ``cos 2*delta``) is the
module default; the spin-1/2 singlet convention (correlation ``-cos delta``)
is available via ``convention="spin"``. The maximally entangled state is an
assumption of this generator, not something inferred from data.

Angles are radians and matter only modulo pi (photon) or 2*pi (spin); tables
depend only on angle differences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .space import ConditionalTable

PHOTON = "photon"
SPIN = "spin"
_CONVENTIONS = (PHOTON, SPIN)


def _pair_correlation(delta: float, convention: str) -> float:
    if convention == PHOTON:
        return math.cos(2.0 * delta)
    return -math.cos(delta)


def _require_convention(convention: str) -> str:
    if convention not in _CONVENTIONS:
        raise ValueError(f"convention must be one of {_CONVENTIONS}, got {convention!r}")
    return convention


@dataclass(frozen=True)
class AngleSettings:
    """Analyzer orientations, two per side, in radians."""

    theta_a: tuple[float, float]
    theta_b: tuple[float, float]

    def __post_init__(self) -> None:
        for name, pair in (("theta_a", self.theta_a), ("theta_b", self.theta_b)):
            if len(pair) != 2 or not all(math.isfinite(t) for t in pair):
                raise ValueError(f"{name} must be two finite angles, got {pair!r}")

    @classmethod
    def from_degrees(cls, a: tuple[float, float], b: tuple[float, float]) -> "AngleSettings":
        return cls(
            (math.radians(a[0]), math.radians(a[1])),
            (math.radians(b[0]), math.radians(b[1])),
        )


def canonical_chsh_angles() -> AngleSettings:
    """The standard maximally violating configuration (0, 45; 22.5, -22.5 degrees)."""
    return AngleSettings.from_degrees((0.0, 45.0), (22.5, -22.5))


def predicted_correlations(angles: AngleSettings, *, convention: str = PHOTON) -> np.ndarray:
    """2x2 matrix of pair correlations for each setting pair."""
    _require_convention(convention)
    out = np.empty((2, 2))
    for i, ti in enumerate(angles.theta_a):
        for j, tj in enumerate(angles.theta_b):
            out[i, j] = _pair_correlation(ti - tj, convention)
    return out


def singlet_table(angles: AngleSettings, *, convention: str = PHOTON) -> ConditionalTable:
    """Conditional table for a maximally entangled pair at the given angles.

    Entries lie in [0, 1/2], each block sums to 1, and all one-side marginals
    equal 1/2, so the table is always free of signaling.
    """
    corr = predicted_correlations(angles, convention=convention)
    q = np.empty((2, 2, 2, 2))
    for i in range(2):
        for j in range(2):
            c = corr[i, j]
            q[i, j, 0, 0] = (1.0 + c) / 4.0
            q[i, j, 1, 1] = (1.0 + c) / 4.0
            q[i, j, 0, 1] = (1.0 - c) / 4.0
            q[i, j, 1, 0] = (1.0 - c) / 4.0
    return ConditionalTable.from_blocks(q)


@dataclass(frozen=True)
class ScanResult:
    """Grid maximum of the conditional CHSH combination |Q11 + Q12 + Q21 - Q22|."""

    max_abs_s: float
    best_angles: AngleSettings
    resolution: int
    n_points: int
    dial_values: np.ndarray  # the shared per-dial angle values (radians)
    s_values: np.ndarray  # |S| over the (t1, t2, u1, u2) grid


def tsirelson_scan(resolution: int, *, convention: str = PHOTON) -> ScanResult:
    """Evaluate |S_cond| over a full 4-dial angle grid and return the maximum.

    Each dial takes ``resolution`` evenly spaced values covering a half turn
    (photon convention; a full turn for spin), endpoints included, so
    resolution 17 steps by 11.25 degrees and contains the canonical
    maximally violating configuration. The maximum can never exceed the
    quantum bound 2*sqrt(2).
    """
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    _require_convention(convention)
    period = math.pi if convention == PHOTON else 2.0 * math.pi
    dials = np.linspace(0.0, period, resolution)

    if convention == PHOTON:
        corr = np.cos(2.0 * (dials[:, None] - dials[None, :]))
    else:
        corr = -np.cos(dials[:, None] - dials[None, :])
    # S over the grid: Q11 + Q12 + Q21 - Q22 with dials (t1, t2, u1, u2)
    s = (
        corr[:, None, :, None]  # Q11: (t1, u1)
        + corr[:, None, None, :]  # Q12: (t1, u2)
        + corr[None, :, :, None]  # Q21: (t2, u1)
        - corr[None, :, None, :]  # Q22: (t2, u2)
    )
    s_abs = np.abs(s)
    flat_best = int(np.argmax(s_abs))
    t1, t2, u1, u2 = np.unravel_index(flat_best, s_abs.shape)
    best = AngleSettings(
        (float(dials[t1]), float(dials[t2])), (float(dials[u1]), float(dials[u2]))
    )
    return ScanResult(
        max_abs_s=float(s_abs[t1, t2, u1, u2]),
        best_angles=best,
        resolution=resolution,
        n_points=int(s_abs.size),
        dial_values=dials,
        s_values=s_abs,
    )
