#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Binary solution snapshots and CSV export.

Layout (little endian): magic "HESS1", int32 n, n × int32 shape, float64 h,
int32 domain code (0 box, 1 ball), domain parameters (ball: float64 radius;
box: n × 2 float64 bounds), then prod(shape) float64 values in row-major order.
"""

import logging
import struct
from pathlib import Path
from typing import Union

import numpy as np

from ..algebra.spectral import jacobi_eigh_batch
from ..algebra.symmfunc import sigma_batch
from ..config import SNAPSHOT_MAGIC
from ..errors import ConfigError, SnapshotError
from ..models.solver import Grid, ScalarField
from ..writer import write_csv
from .grid import build_ball_grid, build_box_grid
from .operator import hessians

logger = logging.getLogger(__name__)

DOMAIN_CODES = {"box": 0, "ball": 1}


def write_snapshot(path: Union[str, Path], u: ScalarField) -> Path:
    grid = u.grid
    path = Path(path)
    header = bytearray(SNAPSHOT_MAGIC)
    header += struct.pack("<i", grid.n)
    header += struct.pack(f"<{grid.n}i", *grid.shape)
    header += struct.pack("<d", grid.h)
    header += struct.pack("<i", DOMAIN_CODES[grid.domain])
    if grid.domain == "ball":
        header += struct.pack("<d", grid.radius)
    else:
        for lo, hi in zip(grid.lower, grid.upper):
            header += struct.pack("<dd", lo, hi)
    with path.open("wb") as fh:
        fh.write(bytes(header))
        fh.write(np.ascontiguousarray(u.values, dtype="<f8").tobytes())
    logger.debug("Snapshot written: %s (%d values)", path, grid.size)
    return path


class _Reader:
    def __init__(self, blob: bytes, path: Path):
        self.blob = blob
        self.pos = 0
        self.path = path

    def take(self, fmt: str):
        size = struct.calcsize(fmt)
        if self.pos + size > len(self.blob):
            raise SnapshotError(f"snapshot {self.path} is truncated in its header",
                                {"offset": self.pos, "needed": size, "length": len(self.blob)})
        values = struct.unpack_from(fmt, self.blob, self.pos)
        self.pos += size
        return values


def read_snapshot(path: Union[str, Path]) -> ScalarField:
    """Load a snapshot, validating magic, header and payload length."""
    path = Path(path)
    try:
        blob = path.read_bytes()
    except OSError as e:
        raise SnapshotError(f"cannot read snapshot {path}: {e}")
    if not blob.startswith(SNAPSHOT_MAGIC):
        raise SnapshotError(f"{path} is not a snapshot (bad magic)", {"magic": blob[:len(SNAPSHOT_MAGIC)].hex()})
    reader = _Reader(blob, path)
    reader.pos = len(SNAPSHOT_MAGIC)
    (n,) = reader.take("<i")
    if not 1 <= n <= 16:
        raise SnapshotError(f"snapshot {path} has implausible dimension {n}", {"n": n})
    shape = reader.take(f"<{n}i")
    (h,) = reader.take("<d")
    (code,) = reader.take("<i")
    details = {"n": n, "shape": list(shape), "h": h, "domain_code": code}
    if len(set(shape)) != 1 or shape[0] < 2:
        raise SnapshotError(f"snapshot {path} has a non-cubic or degenerate shape", details)

    try:
        if code == DOMAIN_CODES["ball"]:
            (radius,) = reader.take("<d")
            grid = build_ball_grid(n, shape[0], radius)
        elif code == DOMAIN_CODES["box"]:
            flat = reader.take(f"<{2 * n}d")
            grid = build_box_grid(n, shape[0], [flat[2 * i:2 * i + 2] for i in range(n)])
        else:
            raise SnapshotError(f"snapshot {path} has unknown domain code {code}", details)
    except ConfigError as e:
        raise SnapshotError(f"snapshot {path} describes an invalid grid: {e}", details)
    if not np.isclose(grid.h, h, rtol=1e-12, atol=0.0):
        raise SnapshotError(f"snapshot {path} spacing does not match its domain", details)

    expected = int(np.prod(shape)) * 8
    payload = blob[reader.pos:]
    if len(payload) != expected:
        details.update({"payload_bytes": len(payload), "expected_bytes": expected})
        raise SnapshotError(f"snapshot {path} payload has {len(payload)} bytes, expected {expected}", details)
    values = np.frombuffer(payload, dtype="<f8").astype(float).reshape(shape)
    return ScalarField(grid, values)


def export_csv(path: Union[str, Path], u: ScalarField) -> int:
    """Rows (x, u, λ_1..λ_n, σ_{n-1}) for every interior point."""
    grid: Grid = u.grid
    n = grid.n
    eig, _ = jacobi_eigh_batch(hessians(u))
    sig = sigma_batch(eig, n - 1)
    x = grid.points(grid.interior_flat)
    values = u.interior_values()
    header = [f"x_{i + 1}" for i in range(n)] + ["u"] + [f"lambda_{i + 1}" for i in range(n)] + ["sigma_n_minus_1"]
    rows = (list(x[r]) + [values[r]] + list(eig[r]) + [sig[r]] for r in range(values.size))
    return write_csv(str(path), header, rows)
