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

# marketnet/ingest.py

"""
Price panels, analysis windows and log-returns.
"""

import io
from dataclasses import dataclass, field
from datetime import date
from pathlib import Path
from typing import Mapping, Optional

import numpy as np
import pandas as pd

from .errors import (
    DataError, DuplicateEntry, EmptyInput, EmptyWindow, LeadingGap, MissingCell,
    NonPositivePrice, UnparseableValue, WindowTooShort, ZeroVariance,
)

FORMATS = ("wide", "long")
FILL_POLICIES = ("none", "forward")


def _frozen(array) -> np.ndarray:
    arr = np.array(array, dtype=float, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class PricePanel:
    """Dates x tickers matrix of closing prices."""
    tickers: tuple
    dates: tuple
    prices: np.ndarray
    meta: Optional[Mapping[str, str]] = None

    def __post_init__(self):
        object.__setattr__(self, "tickers", tuple(self.tickers))
        object.__setattr__(self, "dates", tuple(self.dates))
        object.__setattr__(self, "prices", _frozen(self.prices))
        if self.meta is not None:
            object.__setattr__(self, "meta", dict(self.meta))

        if any(not isinstance(t, str) or not t.strip() for t in self.tickers):
            raise DataError("Tickers must be non-empty strings.")
        if len(set(self.tickers)) != len(self.tickers):
            raise DataError("Tickers must be unique.")
        if self.prices.ndim != 2 or self.prices.shape != (len(self.dates), len(self.tickers)):
            raise DataError(
                f"Price matrix shape {self.prices.shape} does not match "
                f"{len(self.dates)} dates x {len(self.tickers)} tickers."
            )
        for prev, cur in zip(self.dates, self.dates[1:]):
            if not prev < cur:
                raise DataError(f"Dates must be strictly increasing ({prev} then {cur}).")
        if not np.all(np.isfinite(self.prices)):
            raise DataError("Prices must be finite.")
        bad = np.argwhere(self.prices <= 0)
        if bad.size:
            t, i = bad[0]
            raise NonPositivePrice(int(t) + 2, self.tickers[i], float(self.prices[t, i]))

    @property
    def n_assets(self) -> int:
        return len(self.tickers)

    @property
    def n_dates(self) -> int:
        return len(self.dates)

    def sector(self, ticker: str) -> Optional[str]:
        if not self.meta:
            return None
        return self.meta.get(ticker)

    def with_meta(self, meta: Optional[Mapping[str, str]]) -> "PricePanel":
        return PricePanel(self.tickers, self.dates, self.prices, meta)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            np.array(self.prices),
            index=pd.Index(self.dates, name="date"),
            columns=list(self.tickers),
        )

    def to_csv(self) -> str:
        """Wide CSV. Floats use their shortest round-trip repr."""
        lines = [",".join(("date",) + self.tickers)]
        for d, row in zip(self.dates, self.prices):
            lines.append(",".join([d.isoformat()] + [repr(float(x)) for x in row]))
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class WindowSpec:
    name: str
    start: date
    end: date

    def __post_init__(self):
        if not self.name:
            raise DataError("Window name must not be empty.")
        if self.start > self.end:
            raise DataError(f"Window '{self.name}' starts after it ends ({self.start} > {self.end}).")

    @classmethod
    def parse(cls, text: str) -> "WindowSpec":
        """Parses `name:start:end` with ISO dates."""
        parts = text.split(":")
        if len(parts) != 3:
            raise DataError(f"Window must look like name:YYYY-MM-DD:YYYY-MM-DD, got {text!r}.")
        name, start, end = (p.strip() for p in parts)
        return cls(name, _iso_date(start, text), _iso_date(end, text))


@dataclass(frozen=True)
class ReturnPanel:
    tickers: tuple
    dates: tuple
    raw: np.ndarray
    normalized: np.ndarray
    sigma: np.ndarray
    meta: Optional[Mapping[str, str]] = field(default=None, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "tickers", tuple(self.tickers))
        object.__setattr__(self, "dates", tuple(self.dates))
        for name in ("raw", "normalized", "sigma"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def n_assets(self) -> int:
        return len(self.tickers)

    @property
    def n_days(self) -> int:
        return len(self.dates)


def _iso_date(text: str, context: str) -> date:
    try:
        return date.fromisoformat(text.strip())
    except ValueError as e:
        raise DataError(f"Unparseable date {text!r} in {context!r}.") from e


def _read_table(text: str) -> pd.DataFrame:
    if not text or not text.strip():
        raise EmptyInput("price file")
    try:
        table = pd.read_csv(
            io.StringIO(text), header=None, dtype=str,
            keep_default_na=False, skip_blank_lines=True,
        )
    except pd.errors.EmptyDataError as e:
        raise EmptyInput("price file") from e
    except pd.errors.ParserError as e:
        raise DataError(f"Malformed CSV: {e}") from e
    table = table.fillna("").apply(lambda col: col.str.strip())
    if len(table) < 2:
        raise EmptyInput("price table (header only)")
    return table


def _parse_dates(values, column: str, first_line: int) -> list:
    parsed = []
    for offset, text in enumerate(values):
        try:
            parsed.append(date.fromisoformat(text))
        except ValueError as e:
            raise UnparseableValue(first_line + offset, column, text) from e
    return parsed


def _parse_price(text: str, line, ticker: str) -> float:
    if text == "":
        return np.nan
    try:
        value = float(text)
    except ValueError as e:
        raise UnparseableValue(line, ticker, text) from e
    if not np.isfinite(value):
        raise UnparseableValue(line, ticker, text)
    if value <= 0:
        raise NonPositivePrice(line, ticker, value)
    return value


def _wide_frame(table: pd.DataFrame) -> tuple[pd.DataFrame, dict]:
    header = list(table.iloc[0])
    if header[0].lower() != "date":
        raise DataError(f"Wide format header must start with 'date', got {header[0]!r}.")
    tickers = header[1:]
    if not tickers or any(t == "" for t in tickers):
        raise DataError("Wide format header needs non-empty ticker names.")
    seen = set()
    for t in tickers:
        if t in seen:
            raise DataError(f"Duplicate ticker column '{t}'.")
        seen.add(t)

    body = table.iloc[1:]
    # file line numbers: header is line 1
    dates = _parse_dates(body.iloc[:, 0], "date", 2)
    lines = {}
    for line, d in enumerate(dates, start=2):
        if d in lines:
            raise DuplicateEntry(d.isoformat())
        lines[d] = line

    values = np.empty((len(dates), len(tickers)))
    for r, (_, row) in enumerate(body.iterrows()):
        for c, ticker in enumerate(tickers):
            values[r, c] = _parse_price(row.iloc[c + 1], r + 2, ticker)

    frame = pd.DataFrame(values, index=dates, columns=tickers)
    return frame, lines


def _long_frame(table: pd.DataFrame) -> tuple[pd.DataFrame, dict]:
    header = [h.lower() for h in table.iloc[0]]
    missing = {"date", "ticker", "close"} - set(header)
    if missing:
        raise DataError(f"Long format needs columns date,ticker,close; missing {sorted(missing)}.")
    body = table.iloc[1:]
    date_col, ticker_col, close_col = (header.index(c) for c in ("date", "ticker", "close"))

    dates = _parse_dates(body.iloc[:, date_col], "date", 2)
    records = {}
    for line, (d, (_, row)) in enumerate(zip(dates, body.iterrows()), start=2):
        ticker = row.iloc[ticker_col]
        if ticker == "":
            raise DataError(f"Empty ticker in row {line}.")
        if (d, ticker) in records:
            raise DuplicateEntry(d.isoformat(), ticker)
        records[(d, ticker)] = _parse_price(row.iloc[close_col], line, ticker)

    series = pd.Series(records)
    frame = series.unstack()
    lines = {d: d.isoformat() for d in frame.index}
    return frame, lines


def parse_csv(text: str, format: str = "wide", fill: str = "none") -> PricePanel:
    """
    Parses a price CSV into a validated PricePanel.

    Args:
        text: CSV content. Wide: `date,T1,T2,...`; long: `date,ticker,close`.
        format: "wide" or "long".
        fill: "none" rejects any missing cell, "forward" forward-fills
              interior gaps and rejects leading gaps.

    Returns:
        A panel with tickers sorted lexicographically and dates ascending.
    """
    if format not in FORMATS:
        raise DataError(f"Unknown CSV format {format!r}; expected one of {FORMATS}.")
    if fill not in FILL_POLICIES:
        raise DataError(f"Unknown fill policy {fill!r}; expected one of {FILL_POLICIES}.")

    table = _read_table(text)
    frame, lines = _wide_frame(table) if format == "wide" else _long_frame(table)
    frame = frame.sort_index().reindex(columns=sorted(frame.columns))

    if frame.isna().to_numpy().any():
        if fill == "none":
            r, c = np.argwhere(frame.isna().to_numpy())[0]
            raise MissingCell(lines[frame.index[r]], frame.columns[c])
        leading = frame.iloc[0].isna()
        if leading.any():
            raise LeadingGap(leading[leading].index[0])
        frame = frame.ffill()

    return PricePanel(tuple(frame.columns), tuple(frame.index), frame.to_numpy())


def parse_sectors(text: str) -> dict:
    """Reads `ticker,sector` rows (header optional)."""
    sectors = {}
    for line in text.splitlines():
        if not line.strip():
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) < 2:
            raise DataError(f"Sector line needs ticker,sector: {line!r}.")
        if parts[0].lower() == "ticker" and parts[1].lower() == "sector":
            continue
        sectors[parts[0]] = parts[1]
    return sectors


def read_panel(path: Path, format: str = "wide", fill: str = "none",
               sectors_path: Optional[Path] = None) -> PricePanel:
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"Input file not found: {path.resolve()}")
    panel = parse_csv(path.read_text(encoding="utf-8"), format=format, fill=fill)
    if sectors_path:
        sectors = parse_sectors(Path(sectors_path).read_text(encoding="utf-8"))
        panel = panel.with_meta({t: sectors[t] for t in panel.tickers if t in sectors})
    return panel


def parse_windows_csv(text: str) -> list[WindowSpec]:
    """Reads `name,start,end` triples, one per line (header optional)."""
    windows = []
    for line in text.splitlines():
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = [p.strip() for p in line.split(",")]
        if len(parts) != 3:
            raise DataError(f"Window line needs name,start,end: {line!r}.")
        if parts[0].lower() == "name" and parts[1].lower() == "start":
            continue
        windows.append(WindowSpec(parts[0], _iso_date(parts[1], line), _iso_date(parts[2], line)))
    return windows


def slice_window(panel: PricePanel, w: WindowSpec) -> PricePanel:
    """Sub-panel holding exactly the rows with w.start <= date <= w.end."""
    rows = [i for i, d in enumerate(panel.dates) if w.start <= d <= w.end]
    if not rows:
        raise EmptyWindow(w.name)
    if len(rows) < 3:
        raise WindowTooShort(w.name, len(rows))
    return PricePanel(
        panel.tickers,
        tuple(panel.dates[i] for i in rows),
        panel.prices[rows[0]:rows[-1] + 1],
        panel.meta,
    )


def log_returns(panel: PricePanel) -> ReturnPanel:
    """
    Raw log-returns ln p[t+1] - ln p[t] and returns normalized by the
    sample (n-1) standard deviation of each ticker.
    """
    if panel.n_dates < 3:
        raise WindowTooShort("panel", panel.n_dates)
    raw = np.diff(np.log(panel.prices), axis=0)
    sigma = raw.std(axis=0, ddof=1)
    # constant growth leaves only round-off in sigma
    constant = sigma <= 1e-12 * np.abs(raw).max(axis=0)
    if constant.any():
        raise ZeroVariance(panel.tickers[int(np.argmax(constant))])
    return ReturnPanel(
        tickers=panel.tickers,
        dates=panel.dates[1:],
        raw=raw,
        normalized=raw / sigma,
        sigma=sigma,
        meta=panel.meta,
    )
