#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Data structures for eigenvalue vectors, cone membership and symmetric matrices.
"""

from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, Optional, Tuple

import numpy as np

from ..errors import ArgumentError


def _frozen(values: np.ndarray) -> np.ndarray:
    values = np.array(values, dtype=float)
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class EigenvalueVector:
    """Spectrum λ = (λ_1, ..., λ_n); `sorted` means descending order."""
    values: np.ndarray
    sorted: bool = False

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 1 or values.size < 2:
            raise ArgumentError(f"eigenvalue vector needs n >= 2 entries, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ArgumentError("eigenvalue vector has non-finite entries")
        if self.sorted and np.any(np.diff(values) > 0):
            raise ArgumentError("eigenvalue vector flagged sorted but is not descending")
        object.__setattr__(self, "values", _frozen(values))

    @classmethod
    def of(cls, values: Iterable[float], sort: bool = False) -> "EigenvalueVector":
        """Build a vector, optionally sorting it descending."""
        arr = np.asarray(list(values) if not isinstance(values, np.ndarray) else values, dtype=float)
        if sort:
            arr = np.sort(arr)[::-1]
            return cls(arr, sorted=True)
        return cls(arr, sorted=bool(arr.size >= 2 and np.all(np.diff(arr) <= 0)))

    @property
    def n(self) -> int:
        return int(self.values.size)

    def __len__(self) -> int:
        return self.n

    def __getitem__(self, i):
        return self.values[i]

    def scaled(self, t: float) -> "EigenvalueVector":
        if t > 0:
            return EigenvalueVector(self.values * t, sorted=self.sorted)
        return EigenvalueVector.of(self.values * t)

    def to_dict(self) -> Dict[str, Any]:
        return {"values": self.values.tolist(), "sorted": self.sorted}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "EigenvalueVector":
        return cls(np.asarray(data["values"], dtype=float), sorted=bool(data.get("sorted", False)))


@dataclass(frozen=True)
class ConeMembership:
    """Result of a Garding-cone test of order k."""
    k: int
    member: bool
    first_failing_order: Optional[int]
    margins: Tuple[float, ...] = field(default_factory=tuple)

    @property
    def worst_margin(self) -> float:
        return min(self.margins) if self.margins else float("nan")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "k": self.k,
            "member": self.member,
            "first_failing_order": self.first_failing_order,
            "margins": list(self.margins),
        }


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Dense symmetric matrix; the upper triangle is mirrored so symmetry is exact."""
    entries: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.entries, dtype=float)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ArgumentError(f"symmetric matrix must be square, got shape {a.shape}")
        if not np.all(np.isfinite(a)):
            raise ArgumentError("symmetric matrix has non-finite entries")
        scale = max(1.0, float(np.max(np.abs(a)))) if a.size else 1.0
        if np.max(np.abs(a - a.T), initial=0.0) > 1e-12 * scale:
            raise ArgumentError("matrix is not symmetric")
        upper = np.triu(a)
        object.__setattr__(self, "entries", _frozen(upper + np.triu(a, 1).T))

    @classmethod
    def diag(cls, values: Iterable[float]) -> "SymMatrix":
        return cls(np.diag(np.asarray(list(values), dtype=float)))

    @classmethod
    def identity(cls, n: int, scale: float = 1.0) -> "SymMatrix":
        return cls(scale * np.eye(n))

    @property
    def dim(self) -> int:
        return int(self.entries.shape[0])

    def __add__(self, other: "SymMatrix") -> "SymMatrix":
        return SymMatrix(self.entries + other.entries)

    def scaled(self, t: float) -> "SymMatrix":
        return SymMatrix(self.entries * t)

    def conjugate(self, q: np.ndarray) -> "SymMatrix":
        """Return Qᵀ W Q."""
        return SymMatrix(q.T @ self.entries @ q)

    def frobenius_inner(self, other: "SymMatrix") -> float:
        return float(np.sum(self.entries * other.entries))

    def to_dict(self) -> Dict[str, Any]:
        return {"dim": self.dim, "entries": self.entries.tolist()}


@dataclass(frozen=True, eq=False)
class EigenSystem:
    """Eigenvalues (descending) and an orthonormal frame whose rows are eigenvectors."""
    eigenvalues: EigenvalueVector
    frame: np.ndarray

    @property
    def n(self) -> int:
        return self.eigenvalues.n

    def reconstruct(self) -> np.ndarray:
        return self.frame.T @ np.diag(self.eigenvalues.values) @ self.frame

    def to_eigenframe(self, a: SymMatrix) -> np.ndarray:
        """Components ã_pq = v_pᵀ A v_q of A in this eigenframe."""
        return self.frame @ a.entries @ self.frame.T
