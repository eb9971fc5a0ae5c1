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

# marketnet/utils.py

from typing import Callable

from colorama import Fore, Style


def colorize(line: str) -> str:
    """Colours a console line by the status glyph it carries."""
    if "✅" in line:
        return f"{Fore.GREEN}{line}{Fore.RESET}"
    if "❌" in line or "💥" in line:
        return f"{Fore.RED}{line}{Fore.RESET}"
    if "⚠️" in line:
        return f"{Fore.YELLOW}{line}{Fore.RESET}"
    return line


def info(message: str):
    print(f"{Fore.CYAN}{message}{Style.RESET_ALL}")


def success(message: str):
    print(f"{Fore.GREEN}✅ {message}{Style.RESET_ALL}")


def warn(message: str):
    print(f"{Fore.YELLOW}⚠️ {message}{Style.RESET_ALL}")


def fail(message: str):
    print(f"{Fore.RED}❌ {message}{Style.RESET_ALL}")


def make_worker_logger(name: str, width: int, sink: Callable[[str], None]) -> Callable[[object], None]:
    """
    Returns a logger that prefixes every message with the padded window
    name, colours it, and hands it to `sink` (a queue's put, or print).
    """
    prefix = f"[{name:<{width}}]"

    def worker_logger(message: object):
        sink(colorize(prefix + " " + str(message)))

    return worker_logger

