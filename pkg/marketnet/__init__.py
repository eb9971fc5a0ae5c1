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

# marketnet/__init__.py

"""
marketnet - correlation-network analytics for asset price panels.
Threshold networks, minimum spanning trees and UPGMA hierarchies of
windowed return correlations, with power-law fits and JSON reports.
"""

__version__ = "1.0.0"

from .config import RunConfig, load_config
from .batch_runner import run_windows
from .ingest import read_panel, parse_csv, log_returns, slice_window
from .corrnet import cross_correlation, distance_matrix
from .report import analyze_window
from .synth import crisis_scenario, generate

__all__ = [
    'RunConfig',
    'load_config',
    'run_windows',
    'read_panel',
    'parse_csv',
    'log_returns',
    'slice_window',
    'cross_correlation',
    'distance_matrix',
    'analyze_window',
    'crisis_scenario',
    'generate',
    '__version__',
]
