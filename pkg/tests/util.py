"""Shared randomized-input generators. Every test seeds its own rng."""

from __future__ import annotations

import numpy as np

import bellspace as bs


def random_settings(rng: np.random.Generator, *, allow_zeros: bool = False) -> bs.SettingDistribution:
    """Weights uniform on the simplex; optionally with hard-zero cells."""
    w = rng.exponential(size=(2, 2))
    if allow_zeros and rng.random() < 0.3:
        mask = rng.random((2, 2)) < 0.4
        if mask.all():
            mask[rng.integers(2), rng.integers(2)] = False
        w = np.where(mask, 0.0, w)
    return bs.SettingDistribution.from_weights(w / w.sum())


def random_product_settings(rng: np.random.Generator) -> bs.SettingDistribution:
    a = rng.exponential(size=2)
    b = rng.exponential(size=2)
    return bs.SettingDistribution.from_marginals(a / a.sum(), b / b.sum())


def random_table(rng: np.random.Generator) -> bs.ConditionalTable:
    """Four independent blocks, each uniform on the 3-simplex (signaling likely)."""
    q = rng.exponential(size=(2, 2, 2, 2))
    q /= q.sum(axis=(2, 3), keepdims=True)
    return bs.ConditionalTable.from_blocks(q)


def consistent_table_from(u, v, r) -> bs.ConditionalTable:
    """Table with one-side means u_i, v_j and correlations r_ij:
    q(eps, eps' | i, j) = (1 + eps*u_i + eps'*v_j + eps*eps'*r_ij) / 4."""
    q = np.empty((2, 2, 2, 2))
    for i in range(2):
        for j in range(2):
            for e, eps in enumerate((1, -1)):
                for ep, eps_p in enumerate((1, -1)):
                    q[i, j, e, ep] = (1 + eps * u[i] + eps_p * v[j] + eps * eps_p * r[i][j]) / 4
    return bs.ConditionalTable.from_blocks(q)


def random_consistent_table(
    rng: np.random.Generator, *, extremal_bias: float = 0.0
) -> bs.ConditionalTable:
    """Marginal-consistent table: means uniform in (-1, 1), correlations
    uniform over their feasible box. ``extremal_bias`` pushes correlations
    toward the box ends so infeasible (CHSH-violating) tables appear too."""
    u = rng.uniform(-1, 1, size=2)
    v = rng.uniform(-1, 1, size=2)
    r = np.empty((2, 2))
    for i in range(2):
        for j in range(2):
            lo = -1 + abs(u[i] + v[j])
            hi = 1 - abs(u[i] - v[j])
            t = rng.uniform()
            if extremal_bias and rng.random() < extremal_bias:
                t = float(rng.random() < 0.5)
            r[i, j] = lo + t * (hi - lo)
    return consistent_table_from(u, v, r)


def random_space(rng: np.random.Generator, *, allow_zeros: bool = False) -> bs.SampleSpace:
    return bs.build_space(random_settings(rng, allow_zeros=allow_zeros), random_table(rng))


def perfect_correlation_table() -> bs.ConditionalTable:
    """q(+,+) = q(-,-) = 1/2 for every setting pair."""
    return bs.ConditionalTable.constant([[0.5, 0.0], [0.0, 0.5]])


def signaling_table() -> bs.ConditionalTable:
    """Block (1,1) is the point mass on (+,+), block (1,2) on (-,-):
    the A1 outcome marginal flips with the far setting (discrepancy 1)."""
    return bs.ConditionalTable.from_blocks(
        {
            (1, 1): [1.0, 0.0, 0.0, 0.0],
            (1, 2): [0.0, 0.0, 0.0, 1.0],
            (2, 1): [0.25, 0.25, 0.25, 0.25],
            (2, 2): [0.25, 0.25, 0.25, 0.25],
        }
    )
