#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Pogorelov quantity (−u)^β λ₁(∇²u) and the test function
P = ln λ₁ + β ln(−u) + (B/2)|∇u|² over solved fields.

|∇²u| is measured by λ₁: on Γ_{n-1} every |λ_i| <= (n−1)λ₁, so λ₁ is
equivalent to the operator norm.
"""

import logging
from typing import Dict, List, Optional, Sequence

import numpy as np

from ..algebra.spectral import jacobi_eigh_batch
from ..config import BETA_SWEEP, TIE_RTOL
from ..errors import ArgumentError, PreconditionError
from ..models.experiment import PogorelovScan, TestFunctionField
from ..models.solver import INTERIOR, ScalarField
from ..solver.grid import build_stencil
from ..solver.operator import gradients, hessians

logger = logging.getLogger(__name__)

VARIANTS = ("gradient", "position")


def _negative_interior(u: ScalarField) -> np.ndarray:
    values = u.interior_values()
    if values.size == 0:
        raise ArgumentError("field has no interior points")
    if np.any(values >= 0):
        worst = float(values.max())
        raise PreconditionError(f"u must be negative in the interior (max {worst:.3e}); maximum principle violated",
                                {"max_u": worst})
    return values


def _argmax_info(u: ScalarField, field: np.ndarray):
    grid = u.grid
    pos = int(np.argmax(field))
    flat = int(grid.interior_flat[pos])
    point = tuple(float(v) for v in grid.points(np.array([flat]))[0])
    st = build_stencil(grid)
    mask = grid.mask.reshape(-1)
    # strictly interior: no axis neighbor on the Dirichlet layer
    away = all(mask[side[pos]] == INTERIOR for side in st.plus + st.minus)
    return pos, point, bool(away)


def localization_weight(lam: Sequence[float], beta: float) -> Optional[float]:
    """min over p > m of ((β−2)/(β+2)·λ₁ + λ_p)/(λ₁ − λ_p); None when all λ_i equal λ₁."""
    lam = np.sort(np.asarray(lam, dtype=float))[::-1]
    scale = max(1.0, abs(lam[0]))
    rest = lam[lam[0] - lam > TIE_RTOL * scale]
    if rest.size == 0:
        return None
    ratio = (beta - 2.0) / (beta + 2.0)
    return float(np.min((ratio * lam[0] + rest) / (lam[0] - rest)))


def beta_threshold(n: int, delta0: float) -> float:
    """max{2n/(n−2), 2/δ₀}, the smallest β the localization argument admits."""
    return max(2.0 * n / (n - 2), 2.0 / delta0)


def pogorelov_scan(u: ScalarField, beta: float) -> PogorelovScan:
    """sup over interior points of (−u)^β λ₁(∇²u) and where it is attained."""
    if beta < 0:
        raise ArgumentError(f"beta must be nonnegative, got {beta}")
    values = _negative_interior(u)
    eig, _ = jacobi_eigh_batch(hessians(u))
    field = (-values) ** beta * eig[:, 0]
    pos, point, interior = _argmax_info(u, field)
    return PogorelovScan(
        beta=float(beta), sup_value=float(field[pos]), argmax=point, field=field,
        grid=u.grid.descriptor(), argmax_interior=interior,
        localization_weight=localization_weight(eig[pos], beta),
    )


def pogorelov_sweep(u: ScalarField, betas: Sequence[float] = BETA_SWEEP) -> List[PogorelovScan]:
    return [pogorelov_scan(u, beta) for beta in betas]


def test_function_field(u: ScalarField, beta: float, B: float = 0.0, variant: str = "gradient") -> TestFunctionField:
    """P per interior point: 'gradient' adds (B/2)|∇u|², 'position' adds |x|²/2."""
    if variant not in VARIANTS:
        raise ArgumentError(f"unknown test function variant {variant!r}")
    values = _negative_interior(u)
    eig, _ = jacobi_eigh_batch(hessians(u))
    if np.any(eig[:, 0] <= 0):
        raise PreconditionError("λ₁ must be positive at every interior point")
    P = np.log(eig[:, 0]) + beta * np.log(-values)
    if variant == "gradient":
        P = P + 0.5 * B * np.sum(gradients(u) ** 2, axis=1)
    else:
        P = P + 0.5 * np.sum(u.grid.points(u.grid.interior_flat) ** 2, axis=1)
    pos, point, interior = _argmax_info(u, P)
    return TestFunctionField(beta=float(beta), B=float(B), variant=variant, values=P, argmax=point,
                             max_value=float(P[pos]), argmax_interior=interior)


def refinement_change(sups: Dict[int, float]) -> Optional[float]:
    """Relative change of the supremum between the two finest grids."""
    if len(sups) < 2:
        return None
    fine = sorted(sups)
    a, b = sups[fine[-2]], sups[fine[-1]]
    return abs(b - a) / max(abs(b), 1e-300)
