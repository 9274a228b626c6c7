#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Shared plumbing for command implementations: run manifests and table output.
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

from .. import config
from ..manifest.manager import ManifestManager
from ..models.manifest import RunManifest

logger = logging.getLogger(__name__)


class RunContext:
    """Output directory plus the manifest of the run writing into it."""

    def __init__(self, out_dir: Path, subcommand: str, run_config: Dict[str, Any], seed: Optional[int] = None):
        self.out_dir = Path(out_dir)
        self.manager = ManifestManager(self.out_dir)
        self.manifest: RunManifest = self.manager.start(subcommand, run_config, seed=seed, threads=config.THREADS)

    def output(self, name: str) -> Path:
        """Path of an output file, recorded in the manifest."""
        path = self.out_dir / name
        self.manifest.outputs.append(str(path))
        return path

    def record(self, path: str | Path) -> None:
        self.manifest.outputs.append(str(path))

    def finish(self, exit_code: int) -> Path:
        return self.manager.save(self.manifest, exit_code)


def fmt(value: Any, width: int = 12) -> str:
    """Right-aligned table cell; floats in %.4g."""
    if value is None:
        text = "-"
    elif isinstance(value, bool):
        text = "yes" if value else "no"
    elif isinstance(value, float):
        text = f"{value:.4g}"
    else:
        text = str(value)
    return f"{text:>{width}}"


def print_table(columns: Sequence[Tuple[str, int]], rows: List[Sequence[Any]]) -> None:
    """Print aligned rows under a header; columns are (title, width)."""
    print(" ".join(f"{title:>{width}}" for title, width in columns))
    print("-" * (sum(width for _, width in columns) + len(columns) - 1))
    for row in rows:
        print(" ".join(fmt(value, width) for value, (_, width) in zip(row, columns)))
