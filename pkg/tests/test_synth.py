# tests/test_synth.py

from datetime import date

import numpy as np
import pytest

from marketnet.corrnet import cross_correlation
from marketnet.errors import InvalidSpec
from marketnet.ingest import log_returns, slice_window
from marketnet.synth import (
    RegimeSpec, SynthSpec, crisis_scenario, expected_mean_correlation, generate, regime_windows,
)


def one_regime(n_assets, n_days, beta, sector=0.0, n_sectors=1, seed=11):
    regime = RegimeSpec("only", n_days, beta, 0.01, n_sectors, sector)
    return SynthSpec(n_assets=n_assets, n_days=n_days, seed=seed, regimes=(regime,))


def mean_correlation(panel):
    return float(cross_correlation(log_returns(panel)).coefficients().mean())


def test_crisis_scenario_shape():
    spec = crisis_scenario()
    assert spec.n_assets == 50
    assert [r.name for r in spec.regimes] == ["calm", "crisis", "recovery"]
    panel = generate(spec)
    assert panel.n_assets == 50
    assert panel.n_dates == 1201
    assert panel.dates[0] == date(2006, 6, 2)
    assert panel.prices[0] == pytest.approx(np.full(50, 100.0))
    assert set(panel.meta.values()) == {"S1", "S2", "S3", "S4", "S5"}


def test_same_seed_same_bytes():
    spec = one_regime(6, 40, 0.5)
    assert generate(spec).to_csv() == generate(spec).to_csv()
    other = one_regime(6, 40, 0.5, seed=12)
    assert generate(other).to_csv() != generate(spec).to_csv()


def test_independent_assets_are_uncorrelated():
    T = 400
    assert abs(mean_correlation(generate(one_regime(20, T, 0.0)))) < 3 / np.sqrt(T)


def test_one_factor_correlation_is_beta_squared():
    spec = one_regime(50, 400, 0.6)
    assert expected_mean_correlation(spec.regimes[0], 50) == pytest.approx(0.36)
    assert mean_correlation(generate(spec)) == pytest.approx(0.36, abs=0.05)


@pytest.mark.parametrize("beta", [0.3, 0.6, 0.8])
def test_planted_correlation_is_recovered_on_long_samples(beta):
    spec = one_regime(30, 4000, beta, seed=3)
    assert mean_correlation(generate(spec)) == pytest.approx(beta ** 2, abs=0.02)


def test_sector_factor_adds_within_sector_correlation():
    regime = RegimeSpec("s", 400, 0.3, 0.01, 5, 0.5)
    expected = expected_mean_correlation(regime, 50)
    assert expected > 0.09
    spec = SynthSpec(n_assets=50, n_days=400, seed=5, regimes=(regime,))
    assert mean_correlation(generate(spec)) == pytest.approx(expected, abs=0.05)


def test_regime_windows_yield_exact_day_counts():
    spec = crisis_scenario(seed=1)
    panel = generate(spec)
    windows = regime_windows(spec)
    assert [w.name for w in windows] == ["calm", "crisis", "recovery"]
    for w, r in zip(windows, spec.regimes):
        assert log_returns(slice_window(panel, w)).n_days == r.n_days


@pytest.mark.parametrize("changes", [
    {"n_days": 999},
    {"n_assets": 1},
    {"seed": -1},
    {"regimes": ()},
    {"initial_price": 0.0},
])
def test_invalid_specs(changes):
    fields = dict(n_assets=10, n_days=100, seed=1, regimes=(RegimeSpec("a", 100, 0.5, 0.01),))
    fields.update(changes)
    with pytest.raises(InvalidSpec):
        SynthSpec(**fields)


@pytest.mark.parametrize("regime", [
    RegimeSpec("a", 100, 1.0, 0.01),
    RegimeSpec("a", 100, 0.8, 0.01, 2, 0.7),
    RegimeSpec("a", 100, 0.5, 0.0),
    RegimeSpec("a", 100, 0.5, 0.01, 20),
])
def test_invalid_regimes(regime):
    with pytest.raises(InvalidSpec):
        SynthSpec(n_assets=10, n_days=100, seed=1, regimes=(regime,))
