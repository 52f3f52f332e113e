import numpy as np
import pytest

import bellspace as bs
from util import (
    random_consistent_table,
    random_product_settings,
    random_settings,
    random_space,
    random_table,
    signaling_table,
)


# --- setting independence ---------------------------------------------------


def test_uniform_settings_are_independent(canonical_space):
    report = bs.setting_independence(canonical_space)
    assert report.passed
    assert report.max_deviation == 0.0


def test_correlated_settings_fail_with_quarter_deviation(correlated_settings):
    space = bs.build_space(correlated_settings, signaling_table())
    report = bs.setting_independence(space)
    assert not report.passed
    assert report.max_deviation == 0.25


def test_product_settings_are_independent():
    settings = bs.SettingDistribution.from_marginals([0.3, 0.7], [0.6, 0.4])
    space = bs.build_space(settings, signaling_table())
    assert bs.setting_independence(space, tolerance=1e-12).passed


# --- remote-setting independence ---------------------------------------------


def test_product_settings_with_consistent_table_pass():
    rng = np.random.default_rng(2)
    for _ in range(20):
        space = bs.build_space(random_product_settings(rng), random_consistent_table(rng))
        assert bs.remote_setting_independence(space, tolerance=1e-12).passed


def test_correlated_settings_fail_remote_independence(correlated_settings):
    rng = np.random.default_rng(3)
    space = bs.build_space(correlated_settings, random_consistent_table(rng))
    assert not bs.remote_setting_independence(space).passed


def test_concentrated_settings_pass_degenerately():
    rng = np.random.default_rng(4)
    space = bs.build_space(bs.SettingDistribution.concentrated(2, 1), random_table(rng))
    assert bs.remote_setting_independence(space, tolerance=1e-12).passed


def test_signaling_table_breaks_remote_independence_despite_product_settings():
    # product (uniform) settings keep the generators independent, but the
    # far setting still shifts the A1 outcome law through the table blocks
    space = bs.build_space(bs.SettingDistribution.uniform(), signaling_table())
    assert bs.setting_independence(space, tolerance=1e-12).passed
    report = bs.remote_setting_independence(space, tolerance=1e-12)
    assert not report.passed
    # p(A1=+1,a=1,b=1) = 0.25 vs p(A1=+1,a=1)*p(b=1) = 0.25*0.5
    assert report.max_deviation == pytest.approx(0.125, abs=1e-15)


def test_remote_independence_implies_setting_independence():
    rng = np.random.default_rng(5)
    checked_pass = 0
    for _ in range(60):
        space = random_space(rng, allow_zeros=True)
        remote = bs.remote_setting_independence(space, tolerance=1e-9)
        if remote.passed:
            checked_pass += 1
            assert bs.setting_independence(space, tolerance=1e-9).passed
    assert checked_pass > 0


def test_equivalence_for_marginal_consistent_tables():
    rng = np.random.default_rng(6)
    for _ in range(40):
        settings = random_settings(rng, allow_zeros=True)
        space = bs.build_space(settings, random_consistent_table(rng))
        lig = bs.setting_independence(space, tolerance=1e-9).passed
        liog = bs.remote_setting_independence(space, tolerance=1e-9).passed
        assert lig == liog


# --- detection factorizations -------------------------------------------------


def test_detection_factorizations_pass_for_independent_settings():
    rng = np.random.default_rng(7)
    for _ in range(15):
        space = bs.build_space(random_product_settings(rng), random_consistent_table(rng))
        report = bs.detection_factorizations(space, tolerance=1e-12)
        assert report.passed
        assert report.note is None


def test_detection_factorizations_fail_for_correlated_settings(correlated_settings):
    rng = np.random.default_rng(8)
    space = bs.build_space(correlated_settings, random_consistent_table(rng))
    report = bs.detection_factorizations(space)
    assert not report.passed
    assert report.note is not None
    line = next(l for l in report.lines if l.name == "p(A1=0,B1=0) == p(A1=0)*p(B1=0)")
    assert line.lhs == pytest.approx(0.5, abs=1e-15)
    assert line.rhs == pytest.approx(0.25, abs=1e-15)


def test_nondetection_lines_hold_for_any_table_with_product_settings():
    # the joint-nondetection identities depend on settings only; the mixed
    # detection lines additionally need a no-signaling table
    space = bs.build_space(bs.SettingDistribution.uniform(), signaling_table())
    report = bs.detection_factorizations(space, tolerance=1e-12)
    zero_lines = [l for l in report.lines if "B1=0) == p(A1=0)" in l.name or "== p(a!=" in l.name]
    assert all(l.status == "pass" for l in zero_lines)
    assert not report.passed  # the eps-valued lines break under signaling


# --- marginal consistency ------------------------------------------------------


def test_absolute_marginal_consistency_always_holds():
    rng = np.random.default_rng(9)
    for _ in range(30):
        space = random_space(rng, allow_zeros=True)
        assert bs.marginal_consistency(space, tolerance=1e-12).passed


def test_conditional_reductions_hold_with_product_settings():
    rng = np.random.default_rng(10)
    space = bs.build_space(random_product_settings(rng), random_consistent_table(rng))
    report = bs.marginal_consistency(space, tolerance=1e-12)
    assert report.passed
    assert report.note is None


def test_conditional_reductions_fail_with_correlated_settings(correlated_settings):
    rng = np.random.default_rng(11)
    space = bs.build_space(correlated_settings, random_consistent_table(rng))
    report = bs.marginal_consistency(space)
    assert report.passed  # the absolute part is measure-theoretic
    assert report.note is not None  # but the reductions are reported broken


# --- conditional marginal consistency -----------------------------------------


def test_consistent_tables_pass_conditional_consistency():
    rng = np.random.default_rng(12)
    for _ in range(20):
        space = bs.build_space(random_product_settings(rng), random_consistent_table(rng))
        report = bs.conditional_marginal_consistency(space, tolerance=1e-12)
        assert report.passed
        assert report.max_deviation <= 1e-12


def test_signaling_table_reports_unit_deviation():
    space = bs.build_space(bs.SettingDistribution.uniform(), signaling_table())
    report = bs.conditional_marginal_consistency(space)
    assert not report.passed
    assert report.max_deviation == 1.0  # the cross-block marginal discrepancy


def test_equal_blocks_pass_trivially():
    rng = np.random.default_rng(13)
    block = rng.exponential(size=4)
    block /= block.sum()
    table = bs.ConditionalTable.constant(block.reshape(2, 2))
    space = bs.build_space(bs.SettingDistribution.uniform(), table)
    assert bs.conditional_marginal_consistency(space, tolerance=1e-12).passed


def test_zero_weight_pair_raises():
    settings = bs.SettingDistribution.from_weights([[0.5, 0.5], [0.0, 0.0]])
    space = bs.build_space(settings, signaling_table())
    with pytest.raises(bs.NullConditioningError):
        bs.conditional_marginal_consistency(space)


def test_remote_independence_forces_conditional_consistency():
    rng = np.random.default_rng(14)
    hits = 0
    for _ in range(40):
        space = bs.build_space(random_product_settings(rng), random_consistent_table(rng))
        if bs.remote_setting_independence(space, tolerance=1e-12).passed:
            hits += 1
            assert bs.conditional_marginal_consistency(space, tolerance=1e-9).passed
    assert hits > 0


def test_deviation_matches_table_discrepancy_oracle():
    rng = np.random.default_rng(15)
    for _ in range(25):
        table = random_table(rng)
        space = bs.build_space(bs.SettingDistribution.uniform(), table)
        report = bs.conditional_marginal_consistency(space)
        # independent recomputation straight off the block arrays
        a = table.q.sum(axis=3)
        b = table.q.sum(axis=2)
        expected = max(
            float(np.abs(a[:, 0, :] - a[:, 1, :]).max()),
            float(np.abs(b[0, :, :] - b[1, :, :]).max()),
        )
        assert report.max_deviation == pytest.approx(expected, abs=1e-15)
        assert report.passed == (expected <= 1e-9)


# --- relabeling invariance -----------------------------------------------------


def _flip_outcomes(table: bs.ConditionalTable) -> bs.ConditionalTable:
    return bs.ConditionalTable.from_blocks(table.q[:, :, ::-1, ::-1].copy())


def test_checks_invariant_under_joint_outcome_relabeling():
    rng = np.random.default_rng(16)
    for _ in range(15):
        settings = random_settings(rng)
        table = random_table(rng)
        s1 = bs.build_space(settings, table)
        s2 = bs.build_space(settings, _flip_outcomes(table))
        assert (
            bs.setting_independence(s1).passed == bs.setting_independence(s2).passed
        )
        assert (
            bs.remote_setting_independence(s1).passed
            == bs.remote_setting_independence(s2).passed
        )
        assert (
            bs.detection_factorizations(s1).passed == bs.detection_factorizations(s2).passed
        )
        r1 = bs.conditional_marginal_consistency(s1)
        r2 = bs.conditional_marginal_consistency(s2)
        assert r1.passed == r2.passed
        assert r1.max_deviation == pytest.approx(r2.max_deviation, abs=1e-15)
