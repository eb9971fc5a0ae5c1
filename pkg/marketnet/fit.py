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

# marketnet/fit.py

"""
Log-log least-squares power-law fits for degree distributions and
clustering-coefficient curves.
"""

from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
from scipy import stats as sps

from .errors import DegenerateVariance, NonPositiveValue, TooFewPoints
from .topo import DegreeDistribution, SweepRow

BINNINGS = ("unit", "log2")


@dataclass(frozen=True)
class PowerLawFit:
    exponent: float
    stderr: float
    r_squared: float
    n_points: int
    range: tuple
    intercept: float = 0.0
    binning: str = "unit"

    def as_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "stderr": self.stderr,
            "r_squared": self.r_squared,
            "formatted": format_exponent(self),
            "range": list(self.range),
            "n_points": self.n_points,
            "binning": self.binning,
        }


def _in_range(x: float, bounds: Optional[Sequence[float]]) -> bool:
    if bounds is None:
        return True
    lo, hi = bounds
    return lo <= x <= hi


def fit_power_law(points, range=None, binning: str = "unit") -> PowerLawFit:
    """
    Ordinary least squares of ln y on ln x; exponent = -slope.

    A constant y is a perfect fit of a flat law: exponent 0, r^2 = 1 and
    stderr 0.
    """
    pts = [(float(x), float(y)) for x, y in points if _in_range(float(x), range)]
    if len(pts) < 3:
        raise TooFewPoints(len(pts))
    for x, y in pts:
        if not (x > 0 and y > 0):
            raise NonPositiveValue(x, y)

    x = np.array([p[0] for p in pts])
    y = np.array([p[1] for p in pts])
    lx, ly = np.log(x), np.log(y)
    bounds = (float(x.min()), float(x.max()))
    if np.all(lx == lx[0]):
        raise DegenerateVariance("log x")
    if np.all(ly == ly[0]):
        return PowerLawFit(0.0, 0.0, 1.0, len(pts), bounds, float(ly[0]), binning)

    result = sps.linregress(lx, ly)
    residuals = ly - (result.intercept + result.slope * lx)
    ss_res = float(np.sum(residuals ** 2))
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    sxx = float(np.sum((lx - lx.mean()) ** 2))
    stderr = float(np.sqrt(ss_res / (len(pts) - 2) / sxx))
    r_squared = min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return PowerLawFit(
        exponent=-float(result.slope) + 0.0,
        stderr=stderr,
        r_squared=r_squared,
        n_points=len(pts),
        range=bounds,
        intercept=float(result.intercept),
        binning=binning,
    )


def log_binned(dd: DegreeDistribution) -> list[tuple[float, float]]:
    """
    Powers-of-two degree bins [1,2), [2,4), ...; each point is the geometric
    centre of the bin's integer degrees and the bin's mean probability.
    """
    pmf = {k: p for k, p in dd.pmf.items() if k > 0 and p > 0}
    if not pmf:
        return []
    points = []
    lo = 1
    top = max(pmf)
    while lo <= top:
        hi = lo * 2
        mass = sum(p for k, p in pmf.items() if lo <= k < hi)
        if mass > 0:
            points.append((float(np.sqrt(lo * (hi - 1))), mass / (hi - lo)))
        lo = hi
    return points


def fit_degree_exponent(dd: DegreeDistribution, range=None, log_binning: bool = False) -> PowerLawFit:
    """Fits P(k) ~ k^-gamma, skipping k = 0 and empty degrees."""
    if log_binning:
        return fit_power_law(log_binned(dd), range, binning="log2")
    points = [(k, p) for k, p in sorted(dd.pmf.items()) if k > 0 and p > 0]
    return fit_power_law(points, range)


def fit_clustering_scaling(sweep: Sequence[SweepRow], range) -> PowerLawFit:
    """Fits C(theta) ~ theta^-alpha over the sweep rows inside `range`."""
    points = [(row.theta, row.avg_clustering) for row in sweep if _in_range(row.theta, range)]
    return fit_power_law(points)


def format_exponent(fit: PowerLawFit) -> str:
    """
    value(err) notation: err is written in units of the last shown decimal.
    Two decimals by default, fewer when the rounded error ends in zeros,
    e.g. 1.98(36), 2.2(9), 3.0(6), 1.00(0).
    """
    cents = int(round(fit.stderr * 100))
    if cents == 0:
        decimals, digits = 2, 0
    elif cents % 100 == 0:
        decimals, digits = 0, cents // 100
    elif cents % 10 == 0:
        decimals, digits = 1, cents // 10
    else:
        decimals, digits = 2, cents
    return f"{fit.exponent:.{decimals}f}({digits})"
