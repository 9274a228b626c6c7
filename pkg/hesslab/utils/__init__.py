"""Utility functions for the k-Hessian laboratory."""

from .time import utc_now_str, Stopwatch
from .path import ensure_dir, resolve_out_dir

__all__ = ['utc_now_str', 'Stopwatch', 'ensure_dir', 'resolve_out_dir']
