#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Data structures for the finite-difference Dirichlet solver.
"""

from dataclasses import dataclass, field, asdict
from typing import Any, Dict, List, Optional, Tuple

import numpy as np

from ..config import (
    LINEAR_MAX_ITER, LINEAR_RTOL, NEWTON_DAMPING, NEWTON_MAX_HALVINGS, NEWTON_MAX_ITER, NEWTON_TOL,
)

EXTERIOR = 0
BOUNDARY = 1
INTERIOR = 2


@dataclass(eq=False)
class Grid:
    """Uniform tensor grid with a per-point domain mask."""
    n: int
    shape: Tuple[int, ...]
    h: float
    domain: str  # 'box' or 'ball'
    lower: Tuple[float, ...]
    mask: np.ndarray
    radius: Optional[float] = None
    upper: Tuple[float, ...] = ()

    interior_flat: np.ndarray = field(init=False, repr=False)
    boundary_flat: np.ndarray = field(init=False, repr=False)
    stencil: Any = field(default=None, init=False, repr=False)

    def __post_init__(self):
        flat = self.mask.ravel()
        self.interior_flat = np.flatnonzero(flat == INTERIOR)
        self.boundary_flat = np.flatnonzero(flat == BOUNDARY)

    @property
    def size(self) -> int:
        return int(np.prod(self.shape))

    @property
    def interior_count(self) -> int:
        return int(self.interior_flat.size)

    def axis(self, i: int) -> np.ndarray:
        return self.lower[i] + self.h * np.arange(self.shape[i])

    def points(self, flat_indices: Optional[np.ndarray] = None) -> np.ndarray:
        """Coordinates (M, n) of the given flat indices (all points by default)."""
        if flat_indices is None:
            flat_indices = np.arange(self.size)
        multi = np.unravel_index(flat_indices, self.shape)
        return np.stack([self.lower[i] + self.h * multi[i] for i in range(self.n)], axis=1)

    def descriptor(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"n": self.n, "shape": list(self.shape), "h": self.h, "domain": self.domain}
        if self.domain == "ball":
            data["radius"] = self.radius
        else:
            data["bounds"] = [[lo, hi] for lo, hi in zip(self.lower, self.upper)]
        return data


@dataclass(eq=False)
class ScalarField:
    """One value per grid point; boundary points carry the Dirichlet data."""
    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).reshape(self.grid.shape)

    def copy(self) -> "ScalarField":
        return ScalarField(self.grid, self.values.copy())

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)

    def interior_values(self) -> np.ndarray:
        return self.flat[self.grid.interior_flat]


@dataclass(frozen=True)
class PsiSpec:
    """Right-hand side ψ(x, u, ∇u) from the catalog."""
    kind: str
    c: float = 1.0
    s: float = 0.0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(frozen=True)
class BoundarySpec:
    """Dirichlet data g from the catalog."""
    kind: str = "zero"
    params: Dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "params": dict(self.params)}


@dataclass(eq=False)
class ProblemSpec:
    """σ_k(∇²u) = ψ(x, u, ∇u) in Ω, u = g on ∂Ω, with k = n − 1."""
    grid: Grid
    psi: PsiSpec
    boundary: BoundarySpec
    k: int

    def to_dict(self) -> Dict[str, Any]:
        return {
            "grid": self.grid.descriptor(),
            "psi": self.psi.to_dict(),
            "boundary": self.boundary.to_dict(),
            "k": self.k,
        }


@dataclass
class SolverConfig:
    tol: float = NEWTON_TOL
    max_iter: int = NEWTON_MAX_ITER
    max_halvings: int = NEWTON_MAX_HALVINGS
    damping: float = NEWTON_DAMPING
    linear_rtol: float = LINEAR_RTOL
    linear_max_iter: int = LINEAR_MAX_ITER
    initial_guess: str = "auto"  # 'auto', 'quadratic' or 'boundary'

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass(eq=False)
class SolverState:
    u: ScalarField
    residual_norm: float
    newton_iter: int
    admissible_fraction: float
    damping: float
    converged: bool = False
    history: List[Dict[str, Any]] = field(default_factory=list)

    def summary(self) -> Dict[str, Any]:
        return {
            "residual_norm": self.residual_norm,
            "newton_iter": self.newton_iter,
            "admissible_fraction": self.admissible_fraction,
            "damping": self.damping,
            "converged": self.converged,
            "history": self.history,
        }


@dataclass(eq=False)
class ResidualField:
    """Interior residual F(∇²u) − ψ with the admissibility flag per point."""
    values: np.ndarray
    admissible: np.ndarray
    eigenvalues: np.ndarray

    @property
    def norm(self) -> float:
        return float(np.max(np.abs(self.values))) if self.values.size else 0.0

    @property
    def admissible_fraction(self) -> float:
        return float(np.mean(self.admissible)) if self.admissible.size else 1.0
