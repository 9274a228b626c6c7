#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Positive-definiteness certificate of the non-semi-convex branch: the matrix
yᵀy + D with y = √(Λ/F)(1, ..., 1) and a diagonal D, checked through the
matrix determinant lemma det(D + yᵀy) = det D · (1 + Σ y_i²/d_i).
"""

import logging
from typing import Tuple, Union

import numpy as np

from ..algebra.symmfunc import esp_table, in_cone
from ..errors import ArgumentError, PreconditionError
from ..models.spectrum import EigenvalueVector

logger = logging.getLogger(__name__)

DiagonalLike = Union[np.ndarray, list, tuple]


def _diagonal(d: DiagonalLike) -> np.ndarray:
    d = np.asarray(d, dtype=float)
    if d.ndim == 2:
        if d.shape[0] != d.shape[1] or np.any(d - np.diag(np.diag(d))):
            raise ArgumentError("D must be a diagonal matrix")
        d = np.diag(d).copy()
    if d.ndim != 1 or d.size == 0:
        raise ArgumentError(f"D must be a nonempty diagonal, got shape {d.shape}")
    if np.any(d == 0.0):
        raise PreconditionError("D is singular")
    return d


def certificate_matrix(lam: EigenvalueVector, m: int, delta0: float, A: float) -> Tuple[np.ndarray, np.ndarray]:
    """Build (y, diag D), both of length n − m + 1.

    d_1 = (1 − δ₀ − δ₀F/A^{n-1}) λ₁ and d_i = 2λ₁λ_{m+i-1}/(λ₁ − λ_{m+i-1}).
    """
    values = lam.values
    n = lam.n
    if not 1 <= m < n:
        raise ArgumentError(f"multiplicity m={m} must lie in [1, {n - 1}] for the certificate")
    if values[-1] > -A:
        raise PreconditionError(f"λ_n = {values[-1]:.6g} > −A; the certificate belongs to the λ_n <= −A branch")
    if not in_cone(lam, n - 1).member:
        raise PreconditionError(f"λ is not in Γ_{n - 1}")
    table = esp_table(values, n)
    f, big_lambda = table[n - 1], -table[n]
    if big_lambda <= 0:
        raise PreconditionError(f"Λ = −σ_n = {big_lambda:.6g} is not positive")

    y = np.full(n - m + 1, np.sqrt(big_lambda / f))
    rest = values[m:]
    d = np.empty(n - m + 1)
    d[0] = (1.0 - delta0 - delta0 * f / A ** (n - 1)) * values[0]
    d[1:] = 2.0 * values[0] * rest / (values[0] - rest)
    return y, d


def certificate_minors(y: np.ndarray, d: DiagonalLike) -> np.ndarray:
    """Leading principal minors of yᵀy + D via det(D_j)(1 + Σ_{i<=j} y_i²/d_i)."""
    d = _diagonal(d)
    y = np.asarray(y, dtype=float)
    if y.shape != d.shape:
        raise ArgumentError(f"y has shape {y.shape}, D has {d.size} entries")
    return np.cumprod(d) * (1.0 + np.cumsum(y ** 2 / d))


def determinant_lemma_residual(y: np.ndarray, d: DiagonalLike) -> float:
    """|det(yᵀy + D) − det D·(1 + Σ y_i²/d_i)|."""
    d = _diagonal(d)
    y = np.asarray(y, dtype=float)
    direct = np.linalg.det(np.outer(y, y) + np.diag(d))
    return float(abs(direct - certificate_minors(y, d)[-1]))


def rank_one_update_definite(y: np.ndarray, d: DiagonalLike) -> bool:
    """True iff yᵀy + D is positive definite.

    When every d_i but the last is positive the determinant lemma decides
    exactly; otherwise the smallest eigenvalue does. Both are compared.
    """
    d = _diagonal(d)
    y = np.asarray(y, dtype=float)
    eigen_ok = bool(np.linalg.eigvalsh(np.outer(y, y) + np.diag(d))[0] > 0)
    if np.any(d[:-1] <= 0):
        return eigen_ok
    lemma_ok = bool(certificate_minors(y, d)[-1] > 0)
    if lemma_ok != eigen_ok:
        logger.warning("Determinant lemma (%s) and eigenvalue check (%s) disagree for d=%s",
                       lemma_ok, eigen_ok, d.tolist())
    return lemma_ok


def certificate_determinant_bound(lam: EigenvalueVector, m: int, delta0: float, A: float) -> float:
    """(1/2 − Λ/(6Fλ₁)) − (1 + (Λ/F) Σ 1/d_i); nonnegative for n >= 3."""
    y, d = certificate_matrix(lam, m, delta0, A)
    values = lam.values
    n = lam.n
    table = esp_table(values, n)
    f, big_lambda = table[n - 1], -table[n]
    lhs = 1.0 + big_lambda / f * np.sum(1.0 / d)
    rhs = 0.5 - big_lambda / (6.0 * f * values[0])
    return float(rhs - lhs)
