#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Time helpers for run manifests and solver statistics.
"""

import time
from datetime import datetime, timezone


def utc_now_str() -> str:
    """Return current UTC time in ISO-8601 format with 'Z'."""
    return datetime.now(timezone.utc).strftime("%Y-%m-%dT%H:%M:%SZ")


class Stopwatch:
    """Wall-clock timer used as a context manager."""

    def __init__(self):
        self.started = 0.0
        self.elapsed = 0.0

    def __enter__(self) -> "Stopwatch":
        self.started = time.perf_counter()
        return self

    def __exit__(self, *exc) -> None:
        self.elapsed = time.perf_counter() - self.started
