import numpy as np
import pytest

import bellspace as bs
from util import perfect_correlation_table, random_space, random_table


@pytest.fixture
def uniform_random_space():
    rng = np.random.default_rng(11)
    return bs.build_space(bs.SettingDistribution.uniform(), random_table(rng))


def test_nondetection_probability_equals_nonselection(uniform_random_space):
    assert bs.probability(
        uniform_random_space, bs.observable_is(bs.A1, 0)
    ) == pytest.approx(0.5, abs=1e-15)


def test_whole_space_has_probability_one(uniform_random_space):
    assert bs.probability(uniform_random_space, bs.ALWAYS) == pytest.approx(1.0, abs=1e-12)


def test_single_outcome_probability_canonical(canonical_space):
    # independent oracle: p(A1=+1) = sum_j w(1,j) * q(A1=+1 | 1, j), computed
    # from the raw input arrays rather than through the query path
    settings = canonical_space.settings
    table = canonical_space.table
    expected = sum(
        settings.weight(1, j) * (table.prob(1, j, 1, 1) + table.prob(1, j, 1, -1))
        for j in (1, 2)
    )
    assert expected == pytest.approx(0.25, abs=1e-15)
    assert bs.probability(canonical_space, bs.observable_is(bs.A1, 1)) == pytest.approx(
        expected, abs=1e-15
    )


def test_conditional_probability_chain(uniform_random_space):
    space = uniform_random_space
    lhs = bs.conditional_probability(space, bs.observable_is(bs.A1, 1), bs.setting_is("A", 1))
    rhs = bs.probability(space, bs.observable_is(bs.A1, 1)) / space.settings.prob_a(1)
    assert lhs == pytest.approx(rhs, abs=1e-15)


def test_nondetection_is_certain_when_not_selected(uniform_random_space):
    assert bs.conditional_probability(
        uniform_random_space, bs.observable_is(bs.A1, 0), bs.setting_is_not("A", 1)
    ) == pytest.approx(1.0, abs=1e-15)


def test_pair_conditional_recovers_table_entry(uniform_random_space):
    space = uniform_random_space
    got = bs.conditional_probability(
        space,
        bs.observable_is(bs.A1, 1) & bs.observable_is(bs.B1, -1),
        bs.setting_is("A", 1) & bs.setting_is("B", 1),
    )
    assert got == pytest.approx(space.table.prob(1, 1, 1, -1), abs=1e-12)


def test_conditioning_on_null_event_raises(canonical_space):
    contradiction = bs.setting_is("A", 1) & bs.setting_is_not("A", 1)
    with pytest.raises(bs.NullConditioningError):
        bs.conditional_probability(canonical_space, bs.ALWAYS, contradiction)


def test_finite_additivity_over_value_partition(uniform_random_space):
    space = uniform_random_space
    total = sum(
        bs.probability(space, bs.observable_is(bs.A1, v)) for v in (-1, 0, 1)
    )
    assert total == pytest.approx(1.0, abs=1e-15)


def test_total_probability_formula():
    rng = np.random.default_rng(23)
    for _ in range(25):
        space = random_space(rng, allow_zeros=True)
        event = bs.observable_is(bs.A1, 1) & bs.observable_is(bs.B2, -1)
        pieces = sum(
            bs.probability(space, event & bs.setting_is("A", i) & bs.setting_is("B", j))
            for i in (1, 2)
            for j in (1, 2)
        )
        assert pieces == pytest.approx(bs.probability(space, event), abs=1e-15)


def test_nondetection_identities_pass_on_uniform(uniform_random_space):
    report = bs.nondetection_identities(uniform_random_space, tolerance=1e-12)
    assert report.passed
    assert not report.not_applicable()
    names = [line.name for line in report.lines]
    assert "p(A1=0) == p(a!=1)" in names


def test_nondetection_identities_concentrated_settings():
    rng = np.random.default_rng(3)
    space = bs.build_space(bs.SettingDistribution.concentrated(1, 1), random_table(rng))
    report = bs.nondetection_identities(space, tolerance=1e-12)
    assert report.passed
    assert bs.probability(space, bs.observable_is(bs.A1, 0)) == 0.0
    # conditioning on {a!=1, b!=1} (and on the null joint-nondetection event)
    # is impossible, so those lines must be not-applicable, never guessed
    na_names = {line.name for line in report.not_applicable()}
    assert "p(a!=1,b!=1|A1=0,B1=0) == 1" in na_names


def test_identity_reports_pass_on_random_suite():
    rng = np.random.default_rng(5)
    for _ in range(40):
        space = random_space(rng, allow_zeros=True)
        assert bs.nondetection_identities(space, tolerance=1e-12).passed
        assert bs.detection_identities(space, tolerance=1e-12).passed


def test_detection_identities_include_table_recovery(canonical_space):
    report = bs.detection_identities(canonical_space, tolerance=1e-12)
    assert report.passed
    assert any("== q(" in line.name for line in report.lines)


def test_counterfactual_mass_is_exactly_zero():
    rng = np.random.default_rng(17)
    spaces = [random_space(rng, allow_zeros=True) for _ in range(20)]
    spaces.append(
        bs.build_space(bs.SettingDistribution.uniform(), perfect_correlation_table())
    )
    spaces.append(
        bs.build_space(
            bs.SettingDistribution.uniform(), bs.singlet_table(bs.canonical_chsh_angles())
        )
    )
    for space in spaces:
        assert bs.counterfactual_mass(space) == 0.0


def test_counterfactual_quadruples_with_nonzero_sides():
    space = bs.build_space(
        bs.SettingDistribution.uniform(), bs.singlet_table(bs.canonical_chsh_angles())
    )
    # explicit quadruple event with both A-observables nonzero
    event = (
        bs.observable_is(bs.A1, 1)
        & bs.observable_is(bs.A2, 1)
        & bs.observable_is(bs.B1, 1)
        & bs.observable_is(bs.B2, 0)
    )
    assert bs.probability(space, event) == 0.0


def test_event_predicate_str_roundtrip():
    event = bs.observable_is(bs.A1, 1) & bs.setting_is_not("B", 2)
    assert str(event) == "A1=+1, b!=2"
    assert str(bs.ALWAYS) == "(whole space)"
