"""
    marketnet: correlation-network analytics for asset price panels.
    Copyright (C) 2025  The marketnet authors

    This file is part of marketnet.

    marketnet is free software: you can redistribute it and/or modify
    it under the terms of the GNU General Public License as published
    by the Free Software Foundation, either version 3 of the License,
    or (at your option) any later version.

    marketnet is distributed in the hope that it will be useful, but WITHOUT
    ANY WARRANTY; without even the implied warranty of MERCHANTABILITY
    or FITNESS FOR A PARTICULAR PURPOSE. See the GNU General Public
    License for more details.

    You should have received a copy of the GNU General Public License
    along with marketnet. If not, see <https://www.gnu.org/licenses/>.
"""

# marketnet/synth.py

"""
Seeded multi-regime factor model that emits price panels.

Within regime r, asset i in sector g(i) = i mod n_sectors has daily log-return

    v_r * (beta_r * f(t) + s_r * g(t) + sqrt(1 - beta_r^2 - s_r^2) * eps_i(t))

with f, g, eps independent standard normals, so every asset has variance v_r^2
and the planted correlation is beta^2 (+ s^2 within a sector).

Draws come from numpy's PCG64 bit generator, regime by regime, in the order
market factor, sector factors, idiosyncratic terms.
"""

from dataclasses import dataclass, field
from datetime import date

import numpy as np
import pandas as pd

from .errors import InvalidSpec
from .ingest import PricePanel, WindowSpec

DEFAULT_SEED = 20080915
DEFAULT_START = date(2006, 6, 2)


@dataclass(frozen=True)
class RegimeSpec:
    name: str
    n_days: int
    common_loading: float
    idiosyncratic_sigma: float
    n_sectors: int = 1
    sector_loading: float = 0.0

    @property
    def residual_loading(self) -> float:
        return float(np.sqrt(1.0 - self.common_loading ** 2 - self.sector_loading ** 2))


@dataclass(frozen=True)
class SynthSpec:
    n_assets: int
    n_days: int
    seed: int
    regimes: tuple
    initial_price: float = 100.0
    start_date: date = field(default=DEFAULT_START)

    def __post_init__(self):
        object.__setattr__(self, "regimes", tuple(self.regimes))
        validate(self)

    @property
    def tickers(self) -> tuple:
        width = max(3, len(str(self.n_assets)))
        return tuple(f"A{i + 1:0{width}d}" for i in range(self.n_assets))

    def sectors(self) -> dict:
        """Sector labels S1.. following the first regime's sector count."""
        n_sectors = self.regimes[0].n_sectors
        return {t: f"S{i % n_sectors + 1}" for i, t in enumerate(self.tickers)}

    def dates(self) -> list:
        return [d.date() for d in pd.bdate_range(self.start_date, periods=self.n_days + 1)]


def validate(spec: SynthSpec):
    if not isinstance(spec.n_assets, int) or spec.n_assets < 2:
        raise InvalidSpec(f"n_assets must be an integer >= 2, got {spec.n_assets!r}.")
    if not isinstance(spec.seed, int) or spec.seed < 0:
        raise InvalidSpec(f"seed must be a non-negative integer, got {spec.seed!r}.")
    if not spec.initial_price > 0:
        raise InvalidSpec(f"initial_price must be positive, got {spec.initial_price!r}.")
    if not spec.regimes:
        raise InvalidSpec("At least one regime is required.")

    names = [r.name for r in spec.regimes]
    if len(set(names)) != len(names):
        raise InvalidSpec(f"Regime names must be unique, got {names}.")
    for r in spec.regimes:
        if not r.name:
            raise InvalidSpec("Regime names must not be empty.")
        if not isinstance(r.n_days, int) or r.n_days < 1:
            raise InvalidSpec(f"Regime '{r.name}': n_days must be a positive integer.")
        if not 0 <= r.common_loading < 1:
            raise InvalidSpec(f"Regime '{r.name}': common_loading must be in [0, 1).")
        if not 0 <= r.sector_loading < 1:
            raise InvalidSpec(f"Regime '{r.name}': sector_loading must be in [0, 1).")
        if not r.common_loading ** 2 + r.sector_loading ** 2 < 1:
            raise InvalidSpec(f"Regime '{r.name}': common_loading^2 + sector_loading^2 must stay below 1.")
        if not r.idiosyncratic_sigma > 0:
            raise InvalidSpec(f"Regime '{r.name}': idiosyncratic_sigma must be positive.")
        if not isinstance(r.n_sectors, int) or not 1 <= r.n_sectors <= spec.n_assets:
            raise InvalidSpec(f"Regime '{r.name}': n_sectors must be in [1, n_assets].")

    total = sum(r.n_days for r in spec.regimes)
    if total != spec.n_days:
        raise InvalidSpec(f"Regime days sum to {total}, but n_days is {spec.n_days}.")


def crisis_scenario(seed: int = DEFAULT_SEED) -> SynthSpec:
    """Calm, crisis and recovery regimes of 400 days each over 50 assets."""
    regimes = (
        RegimeSpec("calm", 400, 0.45, 0.019, 5, 0.25),
        RegimeSpec("crisis", 400, 0.60, 0.025, 5, 0.25),
        RegimeSpec("recovery", 400, 0.38, 0.017, 5, 0.25),
    )
    return SynthSpec(n_assets=50, n_days=1200, seed=seed, regimes=regimes)


def simulate_returns(spec: SynthSpec) -> np.ndarray:
    """n_days x n_assets log-returns."""
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    blocks = []
    for r in spec.regimes:
        market = rng.standard_normal(r.n_days)
        sector_factors = rng.standard_normal((r.n_days, r.n_sectors))
        noise = rng.standard_normal((r.n_days, spec.n_assets))
        sector = np.arange(spec.n_assets) % r.n_sectors
        block = (
            r.common_loading * market[:, None]
            + r.sector_loading * sector_factors[:, sector]
            + r.residual_loading * noise
        )
        blocks.append(r.idiosyncratic_sigma * block)
    return np.vstack(blocks)


def generate(spec: SynthSpec) -> PricePanel:
    """Price paths exp(ln p0 + cumulative returns); identical seeds give identical panels."""
    validate(spec)
    returns = simulate_returns(spec)
    log_prices = np.log(spec.initial_price) + np.vstack([
        np.zeros((1, spec.n_assets)),
        np.cumsum(returns, axis=0),
    ])
    return PricePanel(spec.tickers, tuple(spec.dates()), np.exp(log_prices), spec.sectors())


def regime_windows(spec: SynthSpec) -> list[WindowSpec]:
    """
    One window per regime. Consecutive windows share their boundary date, so
    each yields exactly its regime's n_days returns.
    """
    dates = spec.dates()
    windows = []
    start = 0
    for r in spec.regimes:
        end = start + r.n_days
        windows.append(WindowSpec(r.name, dates[start], dates[end]))
        start = end
    return windows


def expected_mean_correlation(regime: RegimeSpec, n_assets: int) -> float:
    """beta^2 plus s^2 weighted by the share of same-sector pairs."""
    sector = np.arange(n_assets) % regime.n_sectors
    sizes = np.bincount(sector)
    same = float(np.sum(sizes * (sizes - 1) / 2))
    pairs = n_assets * (n_assets - 1) / 2
    return regime.common_loading ** 2 + regime.sector_loading ** 2 * same / pairs
