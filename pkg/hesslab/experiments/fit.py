#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Least-squares quadratic fit u ≈ ½ xᵀAx + bᵀx + c.
"""

from itertools import combinations_with_replacement
from typing import Tuple

import numpy as np

from ..config import FIT_RANK_RTOL
from ..errors import ArgumentError, NumericalError
from ..models.experiment import QuadraticFit
from ..models.solver import ScalarField


def _design(points: np.ndarray) -> Tuple[np.ndarray, list]:
    n = points.shape[1]
    pairs = list(combinations_with_replacement(range(n), 2))
    cols = [(0.5 if i == j else 1.0) * points[:, i] * points[:, j] for i, j in pairs]
    cols += [points[:, i] for i in range(n)]
    cols.append(np.ones(points.shape[0]))
    return np.stack(cols, axis=1), pairs


def fit_quadratic(points: np.ndarray, values: np.ndarray) -> QuadraticFit:
    points = np.asarray(points, dtype=float)
    values = np.asarray(values, dtype=float)
    n = points.shape[1]
    design, pairs = _design(points)
    if design.shape[0] < design.shape[1]:
        raise ArgumentError(f"quadratic fit needs at least {design.shape[1]} points, got {design.shape[0]}")
    coef, _, rank, sv = np.linalg.lstsq(design, values, rcond=None)
    if rank < design.shape[1] or sv[-1] <= FIT_RANK_RTOL * sv[0]:
        raise NumericalError(f"quadratic fit is rank deficient (rank {rank} of {design.shape[1]})")

    A = np.zeros((n, n))
    for (i, j), a in zip(pairs, coef[:len(pairs)]):
        A[i, j] = A[j, i] = a
    b = coef[len(pairs):len(pairs) + n]
    c = float(coef[-1])
    max_residual = float(np.max(np.abs(design @ coef - values)))
    return QuadraticFit(A=A, b=b, c=c, max_residual=max_residual)


def quadratic_fit(u: ScalarField) -> QuadraticFit:
    """Fit over the interior points of u."""
    grid = u.grid
    return fit_quadratic(grid.points(grid.interior_flat), u.interior_values())
