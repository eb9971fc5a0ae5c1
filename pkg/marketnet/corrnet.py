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

# marketnet/corrnet.py

"""
Cross-correlation matrix, coefficient distribution and Mantegna distances.
"""

from dataclasses import dataclass, field
from typing import Mapping, Optional

import numpy as np
import pandas as pd

from .errors import DataError, TooFewSamples, ZeroVariance
from .ingest import ReturnPanel
from .stats import DistStats, summarize

CORRELATION_CONVENTION = "pearson_population"
DEFAULT_BIN_WIDTH = 0.02


def upper_triangle(matrix: np.ndarray) -> np.ndarray:
    """Entries with i < j in row-major order."""
    n = matrix.shape[0]
    return matrix[np.triu_indices(n, k=1)]


def _frozen_square(matrix) -> np.ndarray:
    arr = np.array(matrix, dtype=float, copy=True)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise DataError(f"Expected a square matrix, got shape {arr.shape}.")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class CorrMatrix:
    tickers: tuple
    C: np.ndarray
    meta: Optional[Mapping[str, str]] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tickers", tuple(self.tickers))
        object.__setattr__(self, "C", _frozen_square(self.C))
        if self.C.shape[0] != len(self.tickers):
            raise DataError("Correlation matrix size does not match ticker count.")

    @property
    def n(self) -> int:
        return len(self.tickers)

    def coefficients(self) -> np.ndarray:
        return upper_triangle(self.C)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(np.array(self.C), index=list(self.tickers), columns=list(self.tickers))


@dataclass(frozen=True)
class DistMatrix:
    tickers: tuple
    D: np.ndarray
    meta: Optional[Mapping[str, str]] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tickers", tuple(self.tickers))
        object.__setattr__(self, "D", _frozen_square(self.D))
        if self.D.shape[0] != len(self.tickers):
            raise DataError("Distance matrix size does not match ticker count.")

    @property
    def n(self) -> int:
        return len(self.tickers)

    def subset(self, ids) -> "DistMatrix":
        ids = list(ids)
        meta = None
        if self.meta:
            meta = {self.tickers[i]: self.meta[self.tickers[i]] for i in ids if self.tickers[i] in self.meta}
        return DistMatrix(tuple(self.tickers[i] for i in ids), self.D[np.ix_(ids, ids)], meta)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(np.array(self.D), index=list(self.tickers), columns=list(self.tickers))


@dataclass(frozen=True)
class Histogram:
    bin_width: float
    centers: np.ndarray
    density: np.ndarray

    def rows(self) -> list[tuple[float, float]]:
        return [(float(c), float(d)) for c, d in zip(self.centers, self.density)]


def cross_correlation(returns: ReturnPanel) -> CorrMatrix:
    """
    Pearson correlation of the return columns, i.e. <r_i r_j> - <r_i><r_j>
    with 1/T time averages over population-standardized returns. Only the
    upper triangle is computed; it is mirrored, clamped to [-1, 1], and the
    diagonal is set to exactly 1.
    """
    if returns.n_days < 2:
        raise TooFewSamples(returns.n_days)
    x = returns.normalized
    centered = x - x.mean(axis=0)
    scale = np.sqrt((centered ** 2).mean(axis=0))
    if np.any(scale == 0):
        raise ZeroVariance(returns.tickers[int(np.argmax(scale == 0))])
    z = centered / scale
    products = (z.T @ z) / returns.n_days

    C = np.triu(products, k=1)
    C = C + C.T
    np.clip(C, -1.0, 1.0, out=C)
    np.fill_diagonal(C, 1.0)
    return CorrMatrix(returns.tickers, C, returns.meta)


def histogram_bins(bin_width: float) -> int:
    """Number of bins of `bin_width` tiling [-1, 1]; the width must divide 2."""
    if not 0 < bin_width <= 2:
        raise DataError(f"Histogram bin width must be in (0, 2], got {bin_width}.")
    n_bins = int(round(2.0 / bin_width))
    if not np.isclose(n_bins * bin_width, 2.0, rtol=0, atol=1e-9):
        raise DataError(f"Histogram bin width {bin_width} does not divide [-1, 1] evenly.")
    return n_bins


def coefficient_distribution(C: CorrMatrix, bin_width: float = DEFAULT_BIN_WIDTH) -> tuple[DistStats, Histogram]:
    """
    Statistics and density histogram over the N(N-1)/2 off-diagonal
    coefficients. Bins tile [-1, 1] with the given width.
    """
    if C.n < 2:
        raise TooFewSamples(C.n)
    n_bins = histogram_bins(bin_width)
    values = C.coefficients()
    edges = np.linspace(-1.0, 1.0, n_bins + 1)
    density, edges = np.histogram(values, bins=edges, density=True)
    centers = (edges[:-1] + edges[1:]) / 2
    return summarize(values), Histogram(2.0 / n_bins, centers, density)


def distance_matrix(C: CorrMatrix) -> DistMatrix:
    """d_ij = sqrt(2 (1 - C_ij)), so 1 -> 0 and -1 -> 2."""
    D = np.sqrt(np.clip(2.0 * (1.0 - C.C), 0.0, 4.0))
    np.fill_diagonal(D, 0.0)
    return DistMatrix(C.tickers, D, C.meta)
