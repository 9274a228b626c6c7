#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Data structures for the concavity inequality of the (n-1)-Hessian operator.
"""

from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from ..errors import ArgumentError, ConfigError
from .spectrum import EigenvalueVector


class Branch(str, Enum):
    SEMICONVEX = "semiconvex"
    NONSEMICONVEX = "nonsemiconvex"
    FULL_MULTIPLICITY = "full_multiplicity"


class SamplerProfile(str, Enum):
    INTERIOR = "interior"
    NEAR_BOUNDARY = "near_boundary"
    LARGE_NEGATIVE = "large_negative"
    CLUSTERED_TOP = "clustered_top"


@dataclass(frozen=True, eq=False)
class ConcavityInstance:
    """One evaluation point (λ, m, ξ, K, δ₀); ξ_i = 0 for 1 < i <= m (1-based)."""
    eigenvalues: EigenvalueVector
    m: int
    xi: np.ndarray
    K: float
    delta0: float

    def __post_init__(self):
        xi = np.asarray(self.xi, dtype=float)
        n = self.eigenvalues.n
        if xi.shape != (n,):
            raise ArgumentError(f"xi must have {n} entries, got shape {xi.shape}")
        if not 1 <= self.m <= n:
            raise ArgumentError(f"multiplicity m={self.m} outside [1, {n}]")
        if np.any(xi[1:self.m] != 0.0):
            raise ArgumentError("xi must vanish on coordinates 2..m")
        if self.K < 0:
            raise ArgumentError(f"K must be nonnegative, got {self.K}")
        if not 0.0 <= self.delta0 < 1.0:
            raise ArgumentError(f"delta0 must lie in [0, 1), got {self.delta0}")
        object.__setattr__(self, "xi", xi)

    @property
    def n(self) -> int:
        return self.eigenvalues.n


@dataclass(frozen=True)
class BranchConstants:
    """Constants of the two proof branches."""
    n: int
    A: float
    C_lambda1: float
    delta0: float
    K: float
    Fmax: float = 1.0

    def __post_init__(self):
        if self.n < 3:
            raise ConfigError(f"n must be at least 3, got {self.n}")
        if not self.A > 1.0:
            raise ConfigError(f"A must exceed 1, got {self.A}")
        if self.Fmax <= 0:
            raise ConfigError(f"Fmax must be positive, got {self.Fmax}")
        floor = (3.0 * self.Fmax + 1.0) ** (1.0 / (self.n - 1))
        if not self.A > floor:
            raise ConfigError(f"A={self.A:.6g} must exceed (3 Fmax + 1)^(1/(n-1)) = {floor:.6g}")
        if not 0.0 < self.delta0 < 1.0:
            raise ConfigError(f"delta0 must lie in (0, 1), got {self.delta0}")
        if not self.delta0 + self.delta0 * self.Fmax / self.A ** (self.n - 1) < 0.25:
            raise ConfigError(
                f"delta0={self.delta0:.6g} violates delta0 + delta0 Fmax / A^(n-1) < 1/4"
            )
        if self.K < 0:
            raise ConfigError(f"K must be nonnegative, got {self.K}")
        if self.C_lambda1 < 0:
            raise ConfigError(f"C_lambda1 must be nonnegative, got {self.C_lambda1}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BranchConstants":
        return cls(**data)


@dataclass
class DeficitReport:
    """LHS − RHS of the concavity inequality with its four summands."""
    deficit: float
    branch: Branch
    cross: float
    square: float
    gap: float
    rhs: float
    certificate_ok: Optional[bool] = None
    semiconvex_subcase: Optional[str] = None

    @property
    def term_breakdown(self) -> Dict[str, float]:
        return {"cross": self.cross, "square": self.square, "gap": self.gap, "rhs": self.rhs}

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data["branch"] = self.branch.value
        return data


@dataclass
class GridPoint:
    """One (δ₀, K, C_lambda1) candidate of the constant search."""
    delta0: float
    K: float
    C_lambda1: float
    min_deficit: float
    counted: int
    verified: bool
    default_candidate: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class SearchResult:
    """Outcome of the constant search."""
    constants: BranchConstants
    min_deficit: float
    verified: bool
    grid: List[GridPoint] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "constants": self.constants.to_dict(),
            "min_deficit": self.min_deficit,
            "verified": self.verified,
            "grid": [g.to_dict() for g in self.grid],
        }


@dataclass(eq=False)
class CampaignResult:
    """Per-sample arrays of one campaign plus its summary."""
    n: int
    constants: BranchConstants
    seed: int
    arrays: Dict[str, np.ndarray]
    summary: Dict[str, Any] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return int(self.arrays["lams"].shape[0])

    @property
    def passed(self) -> bool:
        return bool(self.summary.get("passed", False))
