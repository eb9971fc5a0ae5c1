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

# marketnet/errors.py

"""
Exception hierarchy. Data problems derive from ValueError and map to exit
code 2, numeric problems derive from ArithmeticError and map to exit code 3.
"""

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERIC = 3


class MarketNetError(Exception):
    exit_code = EXIT_DATA


class DataError(MarketNetError, ValueError):
    exit_code = EXIT_DATA


class NumericError(MarketNetError, ArithmeticError):
    exit_code = EXIT_NUMERIC


# --- ingest ---

class EmptyInput(DataError):
    def __init__(self, what: str = "input"):
        super().__init__(f"Empty {what}: nothing to parse.")


class UnparseableValue(DataError):
    def __init__(self, row: int, column: str, value: str):
        self.row, self.column, self.value = row, column, value
        super().__init__(f"Cannot parse {value!r} in row {row}, column '{column}'.")


class NonPositivePrice(DataError):
    def __init__(self, row: int, ticker: str, value: float):
        self.row, self.ticker, self.value = row, ticker, value
        super().__init__(f"Non-positive price {value!r} in row {row} for ticker '{ticker}'.")


class DuplicateEntry(DataError):
    def __init__(self, date: str, ticker: str | None = None):
        self.date, self.ticker = date, ticker
        where = f"({date}, {ticker})" if ticker else f"date {date}"
        super().__init__(f"Duplicate entry for {where}.")


class MissingCell(DataError):
    def __init__(self, row: int, ticker: str):
        self.row, self.ticker = row, ticker
        super().__init__(
            f"Missing price in row {row} for ticker '{ticker}' "
            f"(strict mode; use --fill forward to fill interior gaps)."
        )


class LeadingGap(DataError):
    def __init__(self, ticker: str):
        self.ticker = ticker
        super().__init__(f"Ticker '{ticker}' has no price on the first date; leading gaps cannot be forward-filled.")


class EmptyWindow(DataError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"Window '{name}' selects no rows of the panel.")


class WindowTooShort(DataError):
    def __init__(self, name: str, rows: int):
        self.name, self.rows = name, rows
        super().__init__(f"Window '{name}' selects {rows} rows; at least 3 are required.")


class ZeroVariance(NumericError):
    def __init__(self, ticker: str):
        self.ticker = ticker
        super().__init__(f"Ticker '{ticker}' has constant returns (zero variance).")


# --- stats / fits ---

class TooFewSamples(NumericError):
    def __init__(self, n: int, needed: int = 2):
        self.n = n
        super().__init__(f"Need at least {needed} samples, got {n}.")


class DegenerateVariance(NumericError):
    def __init__(self, what: str):
        super().__init__(f"Zero variance in {what}.")


class TooFewPoints(NumericError):
    def __init__(self, n: int):
        self.n = n
        super().__init__(f"Power-law fit needs at least 3 points, got {n}.")


class NonPositiveValue(NumericError):
    def __init__(self, x: float, y: float):
        super().__init__(f"Log-log fit requires positive values, got point ({x!r}, {y!r}).")


# --- graphs ---

class ThetaOutOfRange(DataError):
    def __init__(self, theta: float):
        self.theta = theta
        super().__init__(f"Threshold {theta!r} is outside [-1, 1].")


class UnsortedThetas(DataError):
    def __init__(self):
        super().__init__("Threshold list must be sorted ascending.")


class EmptyScope(NumericError):
    def __init__(self):
        super().__init__("Largest-component scope requires at least one edge.")


class TopOutOfRange(DataError):
    def __init__(self, top: int, n: int):
        super().__init__(f"Hub count {top} is outside [1, {n}].")


# --- synth / cli ---

class InvalidSpec(DataError):
    pass


class UnknownFormat(DataError):
    def __init__(self, fmt: str, known):
        super().__init__(f"Unknown format '{fmt}'. Known formats: {', '.join(sorted(known))}.")


class MissingArtifact(DataError):
    pass


class StageError(MarketNetError):
    """A module error annotated with the window and pipeline stage it came from."""

    def __init__(self, window: str, stage: str, cause: Exception):
        self.window, self.stage, self.cause = window, stage, cause
        self.exit_code = getattr(cause, "exit_code", EXIT_NUMERIC)
        super().__init__(f"[{window}/{stage}] {cause}")
