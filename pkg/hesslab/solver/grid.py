#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tensor grids for box and ball domains and the precomputed central-difference
stencil over their interior points.

Ball domains use a snapped embedded boundary: a grid point is interior iff
|x| < R − h/2, and every non-interior point touched by an interior stencil is
a boundary point carrying Dirichlet data.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from ..config import MIN_BALL_POINTS, MIN_BOX_POINTS
from ..errors import ConfigError, DiscretizationError
from ..models.solver import BOUNDARY, EXTERIOR, INTERIOR, Grid

logger = logging.getLogger(__name__)


def _strides(shape: Tuple[int, ...]) -> np.ndarray:
    return np.array([int(np.prod(shape[d + 1:])) for d in range(len(shape))], dtype=np.int64)


def stencil_offsets(n: int) -> List[Tuple[int, ...]]:
    """Index offsets used by the axis and mixed second differences."""
    offsets = []
    for i in range(n):
        for sign in (1, -1):
            e = [0] * n
            e[i] = sign
            offsets.append(tuple(e))
    for i, j in combinations(range(n), 2):
        for si, sj in ((1, 1), (-1, -1), (1, -1), (-1, 1)):
            e = [0] * n
            e[i], e[j] = si, sj
            offsets.append(tuple(e))
    return offsets


def build_box_grid(n: int, points: int, bounds: Optional[Sequence[Sequence[float]]] = None) -> Grid:
    """Box [lo_1, hi_1] × ... with `points` per axis; boundary = faces."""
    if points < MIN_BOX_POINTS:
        raise ConfigError(f"box grids need at least {MIN_BOX_POINTS} points per axis, got {points}")
    bounds = [(-1.0, 1.0)] * n if bounds is None else [tuple(map(float, b)) for b in bounds]
    if len(bounds) != n or any(len(b) != 2 or not b[1] > b[0] for b in bounds):
        raise ConfigError(f"box bounds must be {n} pairs lo < hi, got {bounds}")
    widths = {round(hi - lo, 12) for lo, hi in bounds}
    if len(widths) != 1:
        raise ConfigError("box sides must have equal length for a uniform spacing")
    h = (bounds[0][1] - bounds[0][0]) / (points - 1)
    shape = (points,) * n
    idx = np.indices(shape)
    on_face = np.any((idx == 0) | (idx == points - 1), axis=0)
    mask = np.where(on_face, BOUNDARY, INTERIOR).astype(np.int8)
    return Grid(n=n, shape=shape, h=h, domain="box", lower=tuple(b[0] for b in bounds), mask=mask,
                upper=tuple(b[1] for b in bounds))


def build_ball_grid(n: int, points: int, radius: float = 1.0) -> Grid:
    """Ball |x| < R sampled on [−R, R]^n with `points` per axis."""
    if points < MIN_BALL_POINTS:
        raise ConfigError(f"ball grids need at least {MIN_BALL_POINTS} points per axis, got {points}")
    if not radius > 0:
        raise ConfigError(f"ball radius must be positive, got {radius}")
    h = 2.0 * radius / (points - 1)
    shape = (points,) * n
    coords = -radius + h * np.indices(shape)
    interior = np.sqrt(np.sum(coords ** 2, axis=0)) < radius - 0.5 * h

    touched = np.zeros(shape, dtype=bool)
    for off in stencil_offsets(n):
        touched |= np.roll(interior, off, axis=tuple(range(n)))
    mask = np.full(shape, EXTERIOR, dtype=np.int8)
    mask[touched] = BOUNDARY
    mask[interior] = INTERIOR
    grid = Grid(n=n, shape=shape, h=h, domain="ball", lower=(-radius,) * n, mask=mask, radius=radius,
                upper=(radius,) * n)
    logger.debug("Ball grid n=%d N=%d: %d interior, %d boundary points",
                 n, points, grid.interior_count, grid.boundary_flat.size)
    return grid


@dataclass(eq=False)
class Stencil:
    """Flat neighbor indices of every interior point.

    `plus[i]`/`minus[i]` are shifted by ±h e_i; `pp`, `mm`, `pm`, `mp` are keyed
    by the axis pair (i, j) with i < j.
    """
    center: np.ndarray
    plus: List[np.ndarray]
    minus: List[np.ndarray]
    pp: Dict[Tuple[int, int], np.ndarray]
    mm: Dict[Tuple[int, int], np.ndarray]
    pm: Dict[Tuple[int, int], np.ndarray]
    mp: Dict[Tuple[int, int], np.ndarray]

    def all_neighbors(self) -> np.ndarray:
        parts = self.plus + self.minus
        for table in (self.pp, self.mm, self.pm, self.mp):
            parts.extend(table.values())
        return np.concatenate(parts)


def build_stencil(grid: Grid) -> Stencil:
    """Neighbor tables of the interior points; cached on the grid object."""
    if grid.stencil is not None:
        return grid.stencil
    n = grid.n
    strides = _strides(grid.shape)
    center = grid.interior_flat
    multi = np.stack(np.unravel_index(center, grid.shape), axis=1)
    if center.size and (np.any(multi == 0) or np.any(multi == np.array(grid.shape) - 1)):
        raise DiscretizationError("interior point on the outer grid layer; stencil leaves the grid")

    plus = [center + strides[i] for i in range(n)]
    minus = [center - strides[i] for i in range(n)]
    pp, mm, pm, mp = {}, {}, {}, {}
    for i, j in combinations(range(n), 2):
        pp[(i, j)] = center + strides[i] + strides[j]
        mm[(i, j)] = center - strides[i] - strides[j]
        pm[(i, j)] = center + strides[i] - strides[j]
        mp[(i, j)] = center - strides[i] + strides[j]
    stencil = Stencil(center=center, plus=plus, minus=minus, pp=pp, mm=mm, pm=pm, mp=mp)

    flat_mask = grid.mask.reshape(-1)
    if center.size and np.any(flat_mask[stencil.all_neighbors()] == EXTERIOR):
        raise DiscretizationError("stencil of an interior point reaches an exterior point")
    grid.stencil = stencil
    return stencil


def locate(grid: Grid, point) -> int:
    """Flat index of a grid point given as a multi-index or a flat index."""
    if isinstance(point, (int, np.integer)):
        flat = int(point)
        if not 0 <= flat < grid.size:
            raise DiscretizationError(f"flat index {flat} outside the grid")
        return flat
    multi = tuple(int(i) for i in point)
    if len(multi) != grid.n or any(not 0 <= m < s for m, s in zip(multi, grid.shape)):
        raise DiscretizationError(f"grid index {multi} outside shape {grid.shape}")
    return int(np.ravel_multi_index(multi, grid.shape))


def nearest_index(grid: Grid, x: Sequence[float]) -> Tuple[int, ...]:
    """Multi-index of the grid point closest to the coordinates x."""
    x = np.asarray(x, dtype=float)
    idx = np.rint((x - np.asarray(grid.lower)) / grid.h).astype(int)
    return tuple(int(np.clip(i, 0, s - 1)) for i, s in zip(idx, grid.shape))
