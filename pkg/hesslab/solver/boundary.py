#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Dirichlet data catalog: zero, quadratic, radial_exact and rigidity.

Ball grids impose the data on a snapped layer of grid points that straddles
the sphere. Zero data there is continued off the sphere along the quadratic
κ(|x|² − R²)/2 whose Hessian κI matches ψ on the sphere ('extend', the
default); 'snap' imposes literal zeros at every layer point.
"""

from typing import Any, Dict, Optional

import numpy as np

from ..config import RIGIDITY_GROWTH
from ..errors import ConfigError
from ..models.solver import BoundarySpec, Grid, PsiSpec
from .exact import radial_exact_solution, radial_slope
from .psi import evaluate_psi

BOUNDARY_KINDS = ("zero", "quadratic", "radial_exact", "rigidity")
LAYER_MODES = ("extend", "snap")
LAYER_SLOPE_ITERATIONS = 8

_ALLOWED = {
    "zero": {"layer"},
    "quadratic": {"a", "c0"},
    "radial_exact": {"c", "s", "R"},
    "rigidity": {"epsilon", "R", "gamma", "c"},
}


def validate_boundary(spec: BoundarySpec, n: int) -> BoundarySpec:
    if spec.kind not in BOUNDARY_KINDS:
        raise ConfigError(f"unknown boundary kind {spec.kind!r}; expected one of {', '.join(BOUNDARY_KINDS)}")
    unknown = set(spec.params) - _ALLOWED[spec.kind]
    if unknown:
        raise ConfigError(f"unknown parameters for boundary {spec.kind!r}: {sorted(unknown)}")
    if spec.kind == "zero" and spec.params.get("layer", "extend") not in LAYER_MODES:
        raise ConfigError(f"zero boundary layer must be one of {', '.join(LAYER_MODES)}")
    if spec.kind == "quadratic":
        a = spec.params.get("a", 1.0)
        if not np.isscalar(a) and len(a) != n:
            raise ConfigError(f"quadratic boundary needs a scalar or {n} coefficients")
    if spec.kind == "rigidity" and n < 2:
        raise ConfigError("rigidity boundary data needs n >= 2")
    return spec


def _default_radius(grid: Grid, params: Dict[str, Any]) -> float:
    if "R" in params:
        return float(params["R"])
    if grid.radius is not None:
        return float(grid.radius)
    return float(max(abs(v) for v in tuple(grid.lower) + tuple(grid.upper)))


def layer_slope(psi: PsiSpec, n: int, R: float) -> float:
    """κ with σ_{n-1}(κI) = n κ^{n-1} = ψ(x, 0, κx) on |x| = R.

    Every catalog ψ is constant on an origin-centred sphere, so one point
    fixes κ; the gradient dependence is resolved by fixed-point sweeps.
    """
    x = np.zeros((1, n))
    x[0, 0] = R
    kappa = radial_slope(n, psi.c)
    for _ in range(LAYER_SLOPE_ITERATIONS):
        value, _, _ = evaluate_psi(psi, x, np.zeros(1), kappa * x)
        kappa = radial_slope(n, float(value[0]))
    return kappa


def rigidity_perturbation(x: np.ndarray, R: float, epsilon: float, gamma: float = RIGIDITY_GROWTH) -> np.ndarray:
    """ε R^γ e^{y₂} cos y₁ with y = x/R; harmonic in (y₁, y₂)."""
    y = x / R
    return epsilon * R ** gamma * np.exp(y[:, 1]) * np.cos(y[:, 0])


def boundary_values(spec: BoundarySpec, grid: Grid, x: np.ndarray, psi: Optional[PsiSpec] = None) -> np.ndarray:
    """Evaluate g at points x of shape (M, n).

    Zero data on a ball is extended with the layer slope of `psi`; without
    `psi` (or with layer 'snap') it is zero everywhere.
    """
    params = spec.params
    if spec.kind == "zero":
        extend = params.get("layer", "extend") == "extend"
        if grid.domain == "ball" and extend and psi is not None:
            R = float(grid.radius)
            return 0.5 * layer_slope(psi, grid.n, R) * (np.sum(x ** 2, axis=1) - R ** 2)
        return np.zeros(x.shape[0])
    if spec.kind == "quadratic":
        a = np.broadcast_to(np.asarray(params.get("a", 1.0), dtype=float), (grid.n,))
        return 0.5 * np.sum(a * x ** 2, axis=1) + float(params.get("c0", 0.0))
    if spec.kind == "radial_exact":
        exact = radial_exact_solution(grid.n, float(params.get("c", 1.0)), int(params.get("s", 0)),
                                      _default_radius(grid, params))
        return exact(x)
    if spec.kind == "rigidity":
        R = _default_radius(grid, params)
        base = radial_exact_solution(grid.n, float(params.get("c", 1.0)), 0, R)(x)
        return base + rigidity_perturbation(x, R, float(params.get("epsilon", 0.0)),
                                            float(params.get("gamma", RIGIDITY_GROWTH)))
    raise ConfigError(f"unknown boundary kind {spec.kind!r}")


def dirichlet_field(spec: BoundarySpec, grid: Grid, psi: Optional[PsiSpec] = None) -> np.ndarray:
    """g at every grid point, flattened."""
    return boundary_values(spec, grid, grid.points(), psi)


def sup_boundary(spec: BoundarySpec, grid: Grid, psi: Optional[PsiSpec] = None) -> float:
    return float(np.max(dirichlet_field(spec, grid, psi)[grid.boundary_flat]))
