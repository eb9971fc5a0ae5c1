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

# marketnet/stats.py

from dataclasses import dataclass

import numpy as np
from scipy import stats as sps

from .errors import TooFewSamples
from .ingest import ReturnPanel

KURTOSIS_CONVENTION = "raw"
VOLATILITY_CONVENTION = "cross_sectional_std"


@dataclass(frozen=True)
class DistStats:
    mean: float
    std: float
    skewness: float
    kurtosis: float
    n: int

    def as_dict(self) -> dict:
        return {
            "mean": self.mean,
            "std": self.std,
            "skewness": self.skewness,
            "kurtosis": self.kurtosis,
            "n": self.n,
        }


@dataclass(frozen=True)
class VolatilityReport:
    per_day: np.ndarray
    mean_volatility: float
    convention: str = VOLATILITY_CONVENTION


def summarize(values) -> DistStats:
    """
    Moment summary that also accepts a single value (std, skewness and
    kurtosis are then 0). Skewness and kurtosis are population moments of the
    z-scores; kurtosis is raw (Gaussian -> 3). A constant sample reports 0 for
    both so that every field stays finite.
    """
    x = np.asarray(values, dtype=float).ravel()
    n = x.size
    if n == 0:
        raise TooFewSamples(0, 1)
    mean = float(x.mean())
    if n == 1:
        return DistStats(mean, 0.0, 0.0, 0.0, 1)
    std = float(x.std(ddof=1))
    if np.all(x == x[0]):
        return DistStats(mean, 0.0, 0.0, 0.0, n)
    skewness = float(sps.skew(x, bias=True))
    kurtosis = float(sps.kurtosis(x, fisher=False, bias=True))
    return DistStats(mean, std, skewness, kurtosis, n)


def dist_stats(values) -> DistStats:
    """Mean, sample std, skewness and raw kurtosis of at least two values."""
    n = np.asarray(values, dtype=float).size
    if n < 2:
        raise TooFewSamples(n)
    return summarize(values)


def mean_volatility(returns: ReturnPanel) -> VolatilityReport:
    """
    Per-day volatility is the cross-sectional sample std of raw returns; the
    mean volatility is its time average.
    """
    if returns.n_assets < 2:
        raise TooFewSamples(returns.n_assets)
    per_day = returns.raw.std(axis=1, ddof=1)
    per_day.setflags(write=False)
    return VolatilityReport(per_day, float(per_day.mean()))


def return_stats(returns: ReturnPanel) -> DistStats:
    """Pooled statistics of all raw returns in the window."""
    return dist_stats(returns.raw.ravel())
