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

# marketnet/config.py

from datetime import date
from pathlib import Path
from typing import List, Optional

import tomli
from tomli import TOMLDecodeError

from .corrnet import histogram_bins
from .errors import DataError
from .hier import BAND_MODES, DEFAULT_BAND_CUTOFFS
from .ingest import FILL_POLICIES, FORMATS, WindowSpec, parse_windows_csv
from .synth import DEFAULT_SEED, DEFAULT_START, RegimeSpec, SynthSpec
from .topo import SCOPES

STAGES = ("stats", "threshold", "mst", "hierarchy", "fits")
DEFAULT_SWEEP = (0.0, 0.9, 0.0125)
DEFAULT_CLUSTERING_RANGE = (0.1, 0.5)


class RunConfig:
    """Holds everything one `analyze` run needs."""
    def __init__(self,
                 input_path: Optional[Path] = None,
                 format: str = "wide",
                 fill: str = "none",
                 sectors_path: Optional[Path] = None,
                 windows: Optional[List[WindowSpec]] = None,
                 thetas: Optional[List[float]] = None,
                 sigma_multiples: Optional[List[int]] = None,
                 sweep: tuple = DEFAULT_SWEEP,
                 degree_fit_thetas: Optional[List[float]] = None,
                 clustering_range: tuple = DEFAULT_CLUSTERING_RANGE,
                 degree_range: Optional[tuple] = None,
                 log_binning: bool = False,
                 scope: str = "largest",
                 band_cutoffs: tuple = DEFAULT_BAND_CUTOFFS,
                 band_mode: str = "leaf",
                 hub_top: int = 10,
                 bin_width: float = 0.02,
                 newick_leaves: int = 0,
                 output_dir: Path = Path("./output"),
                 exports: Optional[List[str]] = None,
                 workers: int = 1,
                 stages: Optional[List[str]] = None,
                 seed: Optional[int] = None):
        self.input_path = input_path
        self.format = format
        self.fill = fill
        self.sectors_path = sectors_path
        self.windows = windows or []
        self.thetas = thetas or []
        self.sigma_multiples = [1, 2, 3] if sigma_multiples is None else sigma_multiples
        self.sweep = tuple(sweep)
        self.degree_fit_thetas = degree_fit_thetas or []
        self.clustering_range = tuple(clustering_range)
        self.degree_range = tuple(degree_range) if degree_range else None
        self.log_binning = log_binning
        self.scope = scope
        self.band_cutoffs = tuple(band_cutoffs)
        self.band_mode = band_mode
        self.hub_top = hub_top
        self.bin_width = bin_width
        self.newick_leaves = newick_leaves
        self.output_dir = output_dir
        self.exports = exports or []
        self.workers = workers
        self.stages = list(STAGES) if stages is None else stages
        self.seed = seed

    def validate(self):
        """Raises DataError for settings no analysis can run with."""
        if self.format not in FORMATS:
            raise DataError(f"Unknown format '{self.format}'; expected one of {FORMATS}.")
        if self.fill not in FILL_POLICIES:
            raise DataError(f"Unknown fill policy '{self.fill}'; expected one of {FILL_POLICIES}.")
        if self.scope not in SCOPES:
            raise DataError(f"Unknown scope '{self.scope}'; expected one of {SCOPES}.")
        if self.band_mode not in BAND_MODES:
            raise DataError(f"Unknown band mode '{self.band_mode}'; expected one of {BAND_MODES}.")
        unknown = [s for s in self.stages if s not in STAGES]
        if unknown:
            raise DataError(f"Unknown stages {unknown}; expected a subset of {STAGES}.")
        if not self.stages:
            raise DataError("At least one analysis stage must be selected.")
        if self.workers < 1:
            raise DataError("workers must be at least 1.")
        names = [w.name for w in self.windows]
        if len(set(names)) != len(names):
            raise DataError(f"Window names must be unique, got {names}.")
        for lo_hi, label in ((self.clustering_range, "clustering_range"), (self.degree_range, "degree_range")):
            if lo_hi is not None and (len(lo_hi) != 2 or lo_hi[0] > lo_hi[1]):
                raise DataError(f"{label} must be a [low, high] pair with low <= high.")
        histogram_bins(self.bin_width)
        return self

    def wants(self, stage: str) -> bool:
        return stage in self.stages

    def as_dict(self) -> dict:
        """Run parameters echoed into every report (paths and worker count left out)."""
        return {
            "format": self.format,
            "fill": self.fill,
            "thetas": list(self.thetas),
            "sigma_multiples": list(self.sigma_multiples),
            "sweep": list(self.sweep),
            "degree_fit_thetas": list(self.degree_fit_thetas),
            "clustering_range": list(self.clustering_range),
            "degree_range": list(self.degree_range) if self.degree_range else None,
            "log_binning": self.log_binning,
            "scope": self.scope,
            "band_cutoffs": list(self.band_cutoffs),
            "band_mode": self.band_mode,
            "hub_top": self.hub_top,
            "bin_width": self.bin_width,
            "newick_leaves": self.newick_leaves,
            "stages": list(self.stages),
        }


def _typed(table: dict, key: str, kinds, default=None, where: str = ""):
    value = table.get(key, default)
    if value is None:
        return None
    if isinstance(value, bool) and bool not in (kinds if isinstance(kinds, tuple) else (kinds,)):
        raise TypeError(f"Config key '{where}{key}' must be {_kind_names(kinds)}, got bool.")
    if not isinstance(value, kinds):
        raise TypeError(f"Config key '{where}{key}' must be {_kind_names(kinds)}, got {type(value).__name__}.")
    return value


def _kind_names(kinds) -> str:
    kinds = kinds if isinstance(kinds, tuple) else (kinds,)
    return " or ".join(k.__name__ for k in kinds)


def _numbers(table: dict, key: str, default=None, where: str = "") -> Optional[list]:
    values = _typed(table, key, list, default, where)
    if values is None:
        return None
    for i, v in enumerate(values):
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise TypeError(f"Config key '{where}{key}' position {i} must be a number, got {v!r}.")
    return [float(v) for v in values]


def _pair(table: dict, key: str, default=None, where: str = "") -> Optional[tuple]:
    values = _numbers(table, key, None, where)
    if values is None:
        return default
    if len(values) != 2:
        raise TypeError(f"Config key '{where}{key}' must be a [low, high] pair.")
    return tuple(values)


def _window(entry, i: int) -> WindowSpec:
    if not isinstance(entry, dict):
        raise TypeError(f"windows[{i}] must be a table with name, start and end.")
    try:
        name, start, end = entry["name"], entry["start"], entry["end"]
    except KeyError as e:
        raise KeyError(f"Missing required key {e} in windows[{i}].")
    return WindowSpec(str(name), _as_date(start, f"windows[{i}].start"), _as_date(end, f"windows[{i}].end"))


def _as_date(value, where: str) -> date:
    if isinstance(value, date):
        return value
    if isinstance(value, str):
        try:
            return date.fromisoformat(value)
        except ValueError as e:
            raise ValueError(f"Config key '{where}' is not an ISO date: {value!r}.") from e
    raise TypeError(f"Config key '{where}' must be a date, got {type(value).__name__}.")


def _read_toml(config_path) -> tuple[Path, dict]:
    config_file = Path(config_path)
    if not config_file.is_file():
        raise FileNotFoundError(f"Config file not found: {config_file.resolve()}")
    try:
        with open(config_file, "rb") as f:
            return config_file, tomli.load(f)
    except TOMLDecodeError as e:
        raise ValueError(f"Error parsing '{config_file.name}': The file is not a valid TOML. Details: {e}") from e


def _resolve(base: Path, value: Optional[str]) -> Optional[Path]:
    if value is None:
        return None
    path = Path(value).expanduser()
    return path if path.is_absolute() else base / path


def load_config(config_path: str = "marketnet.toml") -> RunConfig:
    """
    Loads an analysis run from TOML. Relative paths are taken relative to the
    config file's directory.
    """
    config_file, data = _read_toml(config_path)
    base = config_file.parent

    thresholds = _typed(data, "thresholds", dict, {})
    fits = _typed(data, "fits", dict, {})
    mst = _typed(data, "mst", dict, {})
    hierarchy = _typed(data, "hierarchy", dict, {})
    stats = _typed(data, "stats", dict, {})

    windows = [_window(w, i) for i, w in enumerate(_typed(data, "windows", list, []))]
    windows_file = _resolve(base, _typed(data, "windows_file", str))
    if windows_file is not None:
        if not windows_file.is_file():
            raise FileNotFoundError(f"Windows file not found: {windows_file.resolve()}")
        windows += parse_windows_csv(windows_file.read_text(encoding="utf-8"))

    sweep = _typed(thresholds, "sweep", dict, {}, "thresholds.")
    sweep_grid = (
        float(_typed(sweep, "start", (int, float), DEFAULT_SWEEP[0], "thresholds.sweep.")),
        float(_typed(sweep, "stop", (int, float), DEFAULT_SWEEP[1], "thresholds.sweep.")),
        float(_typed(sweep, "step", (int, float), DEFAULT_SWEEP[2], "thresholds.sweep.")),
    )
    multiples = _typed(thresholds, "sigma_multiples", list, None, "thresholds.")
    if multiples is not None and any(isinstance(k, bool) or not isinstance(k, int) for k in multiples):
        raise TypeError("Config key 'thresholds.sigma_multiples' must be a list of integers.")

    return RunConfig(
        input_path=_resolve(base, _typed(data, "input", str)),
        format=_typed(data, "format", str, "wide"),
        fill=_typed(data, "fill", str, "none"),
        sectors_path=_resolve(base, _typed(data, "sectors", str)),
        windows=windows,
        thetas=_numbers(thresholds, "thetas", [], "thresholds."),
        sigma_multiples=multiples,
        sweep=sweep_grid,
        degree_fit_thetas=_numbers(thresholds, "degree_fit_thetas", [], "thresholds."),
        scope=_typed(thresholds, "scope", str, "largest", "thresholds."),
        clustering_range=_pair(fits, "clustering_range", DEFAULT_CLUSTERING_RANGE, "fits."),
        degree_range=_pair(fits, "degree_range", None, "fits."),
        log_binning=_typed(fits, "log_binning", bool, False, "fits."),
        hub_top=_typed(mst, "hub_top", int, 10, "mst."),
        band_cutoffs=tuple(_numbers(hierarchy, "band_cutoffs", list(DEFAULT_BAND_CUTOFFS), "hierarchy.")),
        band_mode=_typed(hierarchy, "band_mode", str, "leaf", "hierarchy."),
        newick_leaves=_typed(hierarchy, "newick_leaves", int, 0, "hierarchy."),
        bin_width=float(_typed(stats, "bin_width", (int, float), 0.02, "stats.")),
        output_dir=_resolve(base, _typed(data, "output_dir", str, "./output")),
        exports=_typed(data, "exports", list, []),
        workers=_typed(data, "workers", int, 1),
        stages=_typed(data, "stages", list, list(STAGES)),
        seed=_typed(data, "seed", int, None),
    )


def apply_overrides(config: RunConfig, **overrides) -> RunConfig:
    """CLI flags win over the file; None and empty lists leave a setting alone."""
    for key, value in overrides.items():
        if not hasattr(config, key):
            raise AttributeError(f"RunConfig has no setting '{key}'.")
        if value is None or (isinstance(value, list) and not value):
            continue
        setattr(config, key, value)
    return config


def _required(table: dict, key: str, kinds, where: str = ""):
    if key not in table:
        raise KeyError(f"'{where}{key}'")
    return _typed(table, key, kinds, None, where)


def synth_spec_from_mapping(table: dict) -> SynthSpec:
    """Builds a SynthSpec from a `[synth]` table with `[[synth.regimes]]` entries."""
    try:
        regimes = []
        for i, r in enumerate(_required(table, "regimes", list, "synth.")):
            where = f"synth.regimes[{i}]."
            if not isinstance(r, dict):
                raise TypeError(f"synth.regimes[{i}] must be a table.")
            regimes.append(RegimeSpec(
                name=_required(r, "name", str, where),
                n_days=_required(r, "n_days", int, where),
                common_loading=float(_required(r, "common_loading", (int, float), where)),
                idiosyncratic_sigma=float(_required(r, "idiosyncratic_sigma", (int, float), where)),
                n_sectors=_typed(r, "n_sectors", int, 1, where),
                sector_loading=float(_typed(r, "sector_loading", (int, float), 0.0, where)),
            ))
        start = table.get("start_date")
        return SynthSpec(
            n_assets=_required(table, "n_assets", int, "synth."),
            n_days=_typed(table, "n_days", int, sum(r.n_days for r in regimes), "synth."),
            seed=_typed(table, "seed", int, DEFAULT_SEED, "synth."),
            regimes=tuple(regimes),
            initial_price=float(_typed(table, "initial_price", (int, float), 100.0, "synth.")),
            start_date=_as_date(start, "synth.start_date") if start is not None else DEFAULT_START,
        )
    except KeyError as e:
        raise KeyError(f"Missing required key in synth config: {e}")


def load_synth_spec(config_path) -> SynthSpec:
    _, data = _read_toml(config_path)
    try:
        table = data["synth"]
    except KeyError:
        raise KeyError("Missing required table [synth] in synth config.")
    if not isinstance(table, dict):
        raise TypeError("Config key 'synth' must be a table.")
    return synth_spec_from_mapping(table)
