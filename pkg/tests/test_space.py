import math

import numpy as np
import pytest
from hypothesis import given, settings as hyp_settings
from hypothesis import strategies as st

import bellspace as bs
from util import perfect_correlation_table, random_settings, random_table


def test_uniform_with_perfect_correlation_blocks():
    space = bs.build_space(bs.SettingDistribution.uniform(), perfect_correlation_table())
    for atom, p in space.atoms():
        if atom.eps == atom.eps_prime:
            assert p == 0.125
        else:
            assert p == 0.0


def test_concentrated_settings_zero_out_other_pairs():
    rng = np.random.default_rng(1)
    space = bs.build_space(bs.SettingDistribution.concentrated(1, 1), random_table(rng))
    for atom, p in space.atoms():
        if (atom.i, atom.j) != (1, 1):
            assert p == 0.0
    assert space.total_probability() == pytest.approx(1.0, abs=1e-12)


def test_canonical_angles_atom_value():
    space = bs.build_space(
        bs.SettingDistribution.uniform(), bs.singlet_table(bs.canonical_chsh_angles())
    )
    # hand-computed (1 + cos 45 deg) / 16
    expected = (1.0 + math.cos(math.radians(45.0))) / 16.0
    assert space.atom_probability(bs.Atom(1, 1, 1, 1)) == pytest.approx(expected, abs=1e-15)
    assert space.total_probability() == pytest.approx(1.0, abs=1e-12)


def test_eval_observable_examples():
    omega = bs.Atom(1, 2, +1, -1)
    assert bs.eval_observable(bs.A1, omega) == +1
    assert bs.eval_observable(bs.A2, omega) == 0
    assert bs.eval_observable(bs.B2, omega) == -1
    assert bs.eval_observable(bs.B1, omega) == 0


def test_eval_generator_examples():
    assert bs.eval_generator("A", bs.Atom(2, 1, 1, -1)) == 2
    assert bs.eval_generator("B", bs.Atom(2, 1, 1, -1)) == 1
    assert bs.eval_generator("B", bs.Atom(1, 2, -1, -1)) == 2


def test_invalid_inputs_rejected():
    with pytest.raises(bs.InvalidDistributionError):
        bs.SettingDistribution.from_weights([[0.5, 0.5], [0.5, -0.5]])
    with pytest.raises(bs.InvalidDistributionError):
        bs.SettingDistribution.from_weights([[0.3, 0.3], [0.3, 0.3]])
    with pytest.raises(bs.InvalidDistributionError):
        bs.ConditionalTable.constant([[0.5, 0.5], [0.5, 0.5]])
    with pytest.raises(bs.InvalidDistributionError):
        bs.Atom(3, 1, 1, 1)
    with pytest.raises(bs.InvalidDistributionError):
        bs.Atom(1, 1, 0, 1)


def test_zero_weight_pairs_are_legal():
    settings = bs.SettingDistribution.from_weights([[0.5, 0.5], [0.0, 0.0]])
    space = bs.build_space(settings, perfect_correlation_table())
    assert space.total_probability() == pytest.approx(1.0, abs=1e-15)


def test_marginals_recomputable():
    settings = bs.SettingDistribution.from_weights([[0.1, 0.2], [0.3, 0.4]])
    assert settings.prob_a(1) == pytest.approx(0.3, abs=1e-15)
    assert settings.prob_a(2) == pytest.approx(0.7, abs=1e-15)
    assert settings.prob_b(1) == pytest.approx(0.4, abs=1e-15)
    assert settings.prob_b(2) == pytest.approx(0.6, abs=1e-15)


def _structural_conditions_hold(space: bs.SampleSpace) -> None:
    # no-background: mass of {X_k nonzero but k not selected} is exactly zero
    for obs in bs.OBSERVABLES:
        side_setting = (lambda a: a.i) if obs.side == "A" else (lambda a: a.j)
        leaked = sum(
            p
            for atom, p in space.atoms()
            if bs.eval_observable(obs, atom) != 0 and side_setting(atom) != obs.index
        )
        assert leaked == 0.0
    # perfect detectors: P(X_k = 0 | own setting = k) = 0 where defined
    for obs in bs.OBSERVABLES:
        selected = bs.setting_is(obs.side, obs.index)
        p_sel = bs.probability(space, selected)
        if p_sel > 0:
            assert (
                bs.conditional_probability(space, bs.observable_is(obs, 0), selected) == 0.0
            )


def test_structural_conditions_canonical(canonical_space):
    _structural_conditions_hold(canonical_space)


def test_roundtrip_marginalization_recovers_settings():
    rng = np.random.default_rng(7)
    for _ in range(50):
        settings = random_settings(rng, allow_zeros=True)
        space = bs.build_space(settings, random_table(rng))
        recovered = space.probs.sum(axis=(2, 3))
        assert np.abs(recovered - settings.weights).max() <= 1e-12
        _structural_conditions_hold(space)
        assert space.total_probability() == pytest.approx(1.0, abs=1e-12)


@st.composite
def weight_arrays(draw):
    raw = draw(
        st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=4, max_size=4).filter(
            lambda v: sum(v) > 0.05
        )
    )
    total = sum(raw)
    return [[raw[0] / total, raw[1] / total], [raw[2] / total, raw[3] / total]]


@st.composite
def block_arrays(draw):
    q = []
    for _ in range(4):
        raw = draw(
            st.lists(st.floats(0.0, 1.0, allow_nan=False), min_size=4, max_size=4).filter(
                lambda v: sum(v) > 0.05
            )
        )
        total = sum(raw)
        q.append([v / total for v in raw])
    return {
        (1, 1): q[0],
        (1, 2): q[1],
        (2, 1): q[2],
        (2, 2): q[3],
    }


@hyp_settings(max_examples=60, deadline=None)
@given(weights=weight_arrays(), blocks=block_arrays())
def test_build_space_invariants_property(weights, blocks):
    space = bs.build_space(
        bs.SettingDistribution.from_weights(weights),
        bs.ConditionalTable.from_blocks(blocks),
    )
    assert space.total_probability() == pytest.approx(1.0, abs=1e-9)
    assert np.all(space.probs >= 0.0)
    for i in (1, 2):
        for j in (1, 2):
            w = space.settings.weight(i, j)
            if w > 0.0:
                for e in (1, -1):
                    for ep in (1, -1):
                        assert space.atom_probability(bs.Atom(i, j, e, ep)) == pytest.approx(
                            w * space.table.prob(i, j, e, ep), abs=1e-15
                        )
