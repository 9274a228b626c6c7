#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Data structures for Pogorelov scans and rigidity tables.
"""

from dataclasses import dataclass, asdict
from typing import Any, Dict, Optional, Tuple

import numpy as np


@dataclass(eq=False)
class PogorelovScan:
    """Per-point (−u)^β λ₁ over the interior and its supremum."""
    beta: float
    sup_value: float
    argmax: Tuple[float, ...]
    field: np.ndarray  # one value per interior point
    grid: Dict[str, Any]
    argmax_interior: bool = True
    localization_weight: Optional[float] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "beta": self.beta,
            "sup_value": self.sup_value,
            "argmax": list(self.argmax),
            "argmax_interior": self.argmax_interior,
            "localization_weight": self.localization_weight,
            "grid": self.grid,
        }


@dataclass(eq=False)
class TestFunctionField:
    """P = ln λ₁ + β ln(−u) + extra term, per interior point."""
    __test__ = False  # not a pytest class

    beta: float
    B: float
    variant: str
    values: np.ndarray
    argmax: Tuple[float, ...]
    max_value: float
    argmax_interior: bool


@dataclass(eq=False)
class QuadraticFit:
    """u ≈ ½ xᵀAx + bᵀx + c over the interior."""
    A: np.ndarray
    b: np.ndarray
    c: float
    max_residual: float

    def to_dict(self) -> Dict[str, Any]:
        return {"A": self.A.tolist(), "b": self.b.tolist(), "c": self.c, "max_residual": self.max_residual}


@dataclass
class RigidityRow:
    """Hessian statistics of one solved ball for the rigidity table."""
    R: float
    h: float
    hessian_center: Tuple[Tuple[float, ...], ...]
    deviation: float
    holder_proxy: float
    fit_residual: float
    newton_iter: int
    ok: bool = True
    message: str = ""

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)
