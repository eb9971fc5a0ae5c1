# tests/conftest.py

from datetime import date, timedelta

import numpy as np
import pytest

from marketnet.corrnet import CorrMatrix, DistMatrix
from marketnet.ingest import PricePanel, log_returns


def tickers_for(n: int) -> tuple:
    return tuple(f"T{i:02d}" for i in range(n))


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def panel_from_returns():
    """Builds a price panel whose log-returns are exactly the given matrix."""
    def build(raw, tickers=None, start=date(2020, 1, 1), meta=None):
        raw = np.asarray(raw, dtype=float)
        n_days, n = raw.shape
        log_prices = np.log(100.0) + np.vstack([np.zeros((1, n)), np.cumsum(raw, axis=0)])
        dates = tuple(start + timedelta(days=i) for i in range(n_days + 1))
        return PricePanel(tickers or tickers_for(n), dates, np.exp(log_prices), meta)
    return build


@pytest.fixture
def returns_of(panel_from_returns):
    def build(raw, **kw):
        return log_returns(panel_from_returns(raw, **kw))
    return build


@pytest.fixture
def corr_from_edges():
    """Correlation matrix with 0.9 on the given edges and 0 elsewhere; threshold it at 0.5."""
    def build(n, edges):
        C = np.zeros((n, n))
        for i, j in edges:
            C[i, j] = C[j, i] = 0.9
        np.fill_diagonal(C, 1.0)
        return CorrMatrix(tickers_for(n), C)
    return build


@pytest.fixture
def random_distance(rng):
    """Symmetric random distance matrix with entries in (0.2, 1.8) and zero diagonal."""
    def build(n, tickers=None):
        D = rng.uniform(0.2, 1.8, size=(n, n))
        D = np.triu(D, k=1)
        D = D + D.T
        return DistMatrix(tickers or tickers_for(n), D)
    return build


@pytest.fixture
def random_corr(rng):
    """Valid correlation matrix from a random factor panel."""
    def build(n, t=60):
        x = rng.standard_normal((t, n)) + 0.6 * rng.standard_normal((t, 1))
        C = np.corrcoef(x, rowvar=False)
        C = (C + C.T) / 2
        np.fill_diagonal(C, 1.0)
        return CorrMatrix(tickers_for(n), np.clip(C, -1, 1))
    return build
