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

# marketnet/batch_runner.py

import multiprocessing
import queue
import sys
import threading
import traceback
from concurrent.futures import ProcessPoolExecutor, as_completed
from pathlib import Path
from typing import Optional

from colorama import Fore, Style
from tqdm import tqdm

from .config import RunConfig
from .errors import EXIT_NUMERIC, EXIT_OK, MarketNetError
from .ingest import PricePanel, WindowSpec
from .report import WindowReport, analyze_window, write_reports, write_window_files
from .utils import make_worker_logger


class WindowOutcome:
    """What one worker hands back: a report, or the error that stopped it."""
    def __init__(self, name: str, report: Optional[WindowReport] = None,
                 error: Optional[str] = None, exit_code: int = EXIT_OK):
        self.name = name
        self.report = report
        self.error = error
        self.exit_code = exit_code

    @property
    def ok(self) -> bool:
        return self.report is not None


def full_panel_window(panel: PricePanel) -> WindowSpec:
    return WindowSpec("full", panel.dates[0], panel.dates[-1])


def analyze_window_worker(panel: PricePanel,
                          window: WindowSpec,
                          config: RunConfig,
                          log_queue,
                          max_name_length: int = 12) -> WindowOutcome:
    """
    Runs in a worker process: analyzes one window and writes its own
    per-window files. Errors are reported through the outcome, never raised.
    """
    worker_logger = make_worker_logger(window.name, max_name_length, log_queue.put)
    try:
        rep = analyze_window(panel, window, config, log=worker_logger)
        written = write_window_files(rep, config.output_dir, config.exports)
        worker_logger(f"✅ {len(written)} files written to {Path(config.output_dir) / window.name}")
        # artifacts stay in the worker; the parent only needs the serializable sections
        rep.artifacts = {}
        return WindowOutcome(window.name, rep)
    except MarketNetError as e:
        worker_logger(f"❌ {e}")
        return WindowOutcome(window.name, error=str(e), exit_code=e.exit_code)
    except Exception as e:
        worker_logger(f"💥 CRITICAL ERROR in window {window.name}: {e}")
        worker_logger(traceback.format_exc())
        return WindowOutcome(window.name, error=str(e), exit_code=EXIT_NUMERIC)


def drain_log_queue(log_queue, pbar: tqdm):
    """Writes worker lines above the bar until the None sentinel; a disabled bar swallows them."""
    for message in iter(log_queue.get, None):
        if not pbar.disable:
            pbar.write(str(message))


def _run_inline(
panel, windows, config, pbar, log_queue, width) -> list[WindowOutcome]:
    outcomes = []
    for window in windows:
        outcomes.append(analyze_window_worker(panel, window, config, log_queue, width))
        pbar.set_postfix_str(window.name, refresh=True)
        pbar.update(1)
    return outcomes


def _run_pool(panel, windows, config, pbar, log_queue, width) -> list[WindowOutcome]:
    outcomes = []
    with ProcessPoolExecutor(max_workers=config.workers) as executor:
        futures = {
            executor.submit(analyze_window_worker, panel, w, config, log_queue, width): w
            for w in windows
        }
        for future in as_completed(futures):
            window = futures[future]
            try:
                outcomes.append(future.result())
            except Exception as e:
                outcomes.append(WindowOutcome(window.name, error=f"worker crashed: {e}", exit_code=EXIT_NUMERIC))
                log_queue.put(f"[run_windows] FATAL ERROR for {window.name}: {e}")
            pbar.set_postfix_str(window.name, refresh=True)
            pbar.update(1)
    return outcomes


def run_windows(panel: PricePanel, config: RunConfig, quiet: bool = False) -> int:
    """
    Analyzes every configured window (the whole panel when none is given),
    in parallel when config.workers > 1, then writes report.json and
    summary.json for the windows that succeeded.

    Returns the most severe exit code observed.
    """
    windows = list(config.windows) or [full_panel_window(panel)]
    out_dir = Path(config.output_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    max_name_length = max(len(w.name) for w in windows)

    manager = multiprocessing.Manager() if config.workers > 1 else None
    log_queue = manager.Queue() if manager else queue.Queue()

    outcomes: list[WindowOutcome] = []
    try:
        with tqdm(total=len(windows), desc="Analyzing", unit="window", disable=quiet) as pbar:
            log_thread = threading.Thread(target=drain_log_queue, args=(log_queue, pbar))
            log_thread.start()
            try:
                runner = _run_pool if config.workers > 1 else _run_inline
                outcomes = runner(panel, windows, config, pbar, log_queue, max_name_length)
            finally:
                log_queue.put(None)
                log_thread.join()
                if manager:
                    manager.shutdown()

    except KeyboardInterrupt:
        print("\n\n" + "=" * 80)
        print(" 🛑 ANALYSIS CANCELLED BY USER")
        print("=" * 80)
        sys.exit(130)

    # keep the configured window order so reports are byte-stable
    order = {w.name: i for i, w in enumerate(windows)}
    outcomes.sort(key=lambda o: order[o.name])
    succeeded = [o for o in outcomes if o.ok]
    failed = [o for o in outcomes if not o.ok]

    if succeeded:
        report_path, summary_path = write_reports([o.report for o in succeeded], out_dir)
        if not quiet:
            print(f"{Fore.GREEN}✅ Report written to: {report_path}{Style.RESET_ALL}")
            print(f"{Fore.GREEN}✅ Summary written to: {summary_path}{Style.RESET_ALL}")

    if not quiet:
        print_summary(len(windows), succeeded, failed)
    return max((o.exit_code for o in failed), default=EXIT_OK)


def print_summary(total: int, succeeded: list, failed: list):
    print("\n" + "=" * 80)
    print(" ANALYSIS SUMMARY")
    print("=" * 80)
    print(f"Total windows processed: {total}")
    print(f" ✅ Success: {len(succeeded)}")
    print(f" ❌ Failed:  {len(failed)}")
    if failed:
        print("\n--- Windows that FAILED ---")
        for o in failed:
            print(f"{Fore.RED}  - {o.name}: {o.error}{Style.RESET_ALL}")
    print("=" * 80)
