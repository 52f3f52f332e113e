import pytest

import bellspace as bs


@pytest.fixture
def canonical_space() -> bs.SampleSpace:
    """Uniform settings, maximally violating analyzer angles."""
    return bs.build_space(
        bs.SettingDistribution.uniform(),
        bs.singlet_table(bs.canonical_chsh_angles()),
    )


@pytest.fixture
def correlated_settings() -> bs.SettingDistribution:
    """The always-equal-settings counterexample (0.5, 0, 0, 0.5)."""
    return bs.SettingDistribution.from_weights([[0.5, 0.0], [0.0, 0.5]])
