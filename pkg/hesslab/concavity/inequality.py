#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
The concavity inequality for F = σ_{n-1}:

    −Σ_{p≠q} F^{pp,qq} ξ_p ξ_q + K (Σ_i F^{ii} ξ_i)² / F + 2 Σ_{i>m} F^{ii} ξ_i² / (λ₁ − λ_i)
        ≥ (1 + δ₀) F^{11} ξ₁² / λ₁

with F^{ii} = σ_{n-2}(λ|i) and F^{pp,qq} = σ_{n-3}(λ|pq). The deficit is
LHS − RHS. Indices in code are 0-based; the multiplicity m counts the leading
entries equal to λ₁, so the gap sum runs over 0-based indices i >= m.
"""

import logging
from typing import Dict, Optional, Sequence

import numpy as np

from ..algebra.symmfunc import (
    esp_table, gradient_batch, hessian_batch, in_cone, sigma, sigma_batch,
)
from ..config import A_MARGIN, DEFAULT_FMAX, TIE_RTOL
from ..errors import ArgumentError, DegenerateGapError, PreconditionError
from ..models.concavity import Branch, BranchConstants, ConcavityInstance, DeficitReport
from ..models.spectrum import EigenvalueVector
from .certificate import certificate_matrix, certificate_minors

logger = logging.getLogger(__name__)


def default_delta0(n: int) -> float:
    """δ₀ = min{1/15, 1/((k+1)(k+3))} with k = n − 1."""
    return min(1.0 / 15.0, 1.0 / (n * (n + 2)))


def default_A(n: int, fmax: float = DEFAULT_FMAX) -> float:
    return A_MARGIN * (3.0 * fmax + 1.0) ** (1.0 / (n - 1))


def default_constants(n: int, fmax: float = DEFAULT_FMAX) -> BranchConstants:
    """Default branch constants: K = (k+1)² = n², λ₁-threshold at A."""
    a = default_A(n, fmax)
    return BranchConstants(n=n, A=a, C_lambda1=a, delta0=default_delta0(n), K=float(n * n), Fmax=fmax)


def deficit_terms_batch(lams: np.ndarray, ms: np.ndarray, xis: np.ndarray) -> Dict[str, np.ndarray]:
    """The K- and δ₀-free pieces of the deficit for a batch.

    Returns 'cross', 'square' (without K), 'gap' and 'rhs' (without 1 + δ₀), so
    that deficit = cross + K·square + gap − (1 + δ₀)·rhs.
    """
    lams = np.asarray(lams, dtype=float)
    xis = np.asarray(xis, dtype=float)
    ms = np.asarray(ms, dtype=int)
    n = lams.shape[1]
    f = sigma_batch(lams, n - 1)
    g = gradient_batch(lams, n - 1)
    h = hessian_batch(lams, n - 1)

    cross = -np.einsum("bp,bpq,bq->b", xis, h, xis)
    square = np.einsum("bi,bi->b", g, xis) ** 2 / f

    idx = np.arange(n)[None, :]
    outside = idx >= ms[:, None]
    spread = lams[:, :1] - lams
    safe = np.where(outside, spread, 1.0)
    gap = np.sum(np.where(outside, 2.0 * g * xis ** 2 / safe, 0.0), axis=1)
    rhs = g[:, 0] * xis[:, 0] ** 2 / lams[:, 0]
    return {"cross": cross, "square": square, "gap": gap, "rhs": rhs, "F": f}


def combine(terms: Dict[str, np.ndarray], K: float, delta0: float) -> np.ndarray:
    return terms["cross"] + K * terms["square"] + terms["gap"] - (1.0 + delta0) * terms["rhs"]


def classify_branch(lams: np.ndarray, ms: np.ndarray, A: float) -> np.ndarray:
    """Branch label per sample: full multiplicity, λ_n <= −A, or semi-convex."""
    lams = np.asarray(lams, dtype=float)
    n = lams.shape[1]
    labels = np.where(lams[:, -1] <= -A, Branch.NONSEMICONVEX.value, Branch.SEMICONVEX.value)
    return np.where(np.asarray(ms) == n, Branch.FULL_MULTIPLICITY.value, labels).astype(object)


def deficit_matrix_batch(lams: np.ndarray, ms: np.ndarray, K: float, delta0: float) -> np.ndarray:
    """Symmetric matrices M with deficit = ξᵀ M ξ on the admissible subspace.

    Rows and columns 1..m−1 (0-based) are replaced by a large positive
    diagonal so they never carry the minimum eigenvalue.
    """
    lams = np.asarray(lams, dtype=float)
    ms = np.asarray(ms, dtype=int)
    n = lams.shape[1]
    f = sigma_batch(lams, n - 1)
    g = gradient_batch(lams, n - 1)
    h = hessian_batch(lams, n - 1)

    mats = -h + K * np.einsum("bi,bj->bij", g, g) / f[:, None, None]
    idx = np.arange(n)[None, :]
    outside = idx >= ms[:, None]
    spread = np.where(outside, lams[:, :1] - lams, 1.0)
    diag = np.where(outside, 2.0 * g / spread, 0.0)
    diag[:, 0] -= (1.0 + delta0) * g[:, 0] / lams[:, 0]
    mats[:, idx[0], idx[0]] += diag

    frozen = (idx >= 1) & (idx < ms[:, None])
    if np.any(frozen):
        big = 10.0 * np.max(np.abs(mats), axis=(1, 2)) + 1.0
        rows = frozen[:, :, None] | frozen[:, None, :]
        mats = np.where(rows, 0.0, mats)
        mats[:, idx[0], idx[0]] += np.where(frozen, big[:, None], 0.0)
    return mats


def worst_direction_batch(lams: np.ndarray, ms: np.ndarray, K: float, delta0: float) -> np.ndarray:
    """Minimum deficit over unit ξ in the admissible subspace, per sample."""
    return np.linalg.eigvalsh(deficit_matrix_batch(lams, ms, K, delta0))[:, 0]


def _validate(instance: ConcavityInstance) -> np.ndarray:
    lam = instance.eigenvalues
    if not lam.sorted:
        raise ArgumentError("concavity instances need a descending eigenvalue vector")
    values = lam.values
    n = lam.n
    if n < 3:
        raise ArgumentError("the concavity inequality needs n >= 3")
    membership = in_cone(lam, n - 1)
    if not membership.member:
        raise PreconditionError(
            f"λ is not in Γ_{n - 1}: σ_{membership.first_failing_order} <= 0",
            {"lambda": values.tolist()},
        )
    scale = max(1.0, abs(values[0]))
    m = instance.m
    if values[0] - values[m - 1] > TIE_RTOL * scale:
        raise ArgumentError(f"λ₁..λ_m are not clustered for m={m}")
    if m < n and values[0] - values[m] <= TIE_RTOL * scale:
        raise DegenerateGapError(
            f"λ₁ − λ_{m + 1} = {values[0] - values[m]:.3g} is within the clustering tolerance",
            {"lambda": values.tolist(), "m": m},
        )
    return values


def deficit(instance: ConcavityInstance, A: Optional[float] = None) -> DeficitReport:
    """Evaluate LHS − RHS of the concavity inequality at one instance."""
    values = _validate(instance)
    n = instance.n
    A = default_A(n) if A is None else A
    lams = values[None, :]
    ms = np.array([instance.m])
    terms = deficit_terms_batch(lams, ms, instance.xi[None, :])
    total = float(combine(terms, instance.K, instance.delta0)[0])
    branch = Branch(classify_branch(lams, ms, A)[0])

    report = DeficitReport(
        deficit=total,
        branch=branch,
        cross=float(terms["cross"][0]),
        square=float(instance.K * terms["square"][0]),
        gap=float(terms["gap"][0]),
        rhs=float((1.0 + instance.delta0) * terms["rhs"][0]),
    )
    if branch is Branch.NONSEMICONVEX:
        y, d = certificate_matrix(instance.eigenvalues, instance.m, instance.delta0, A)
        report.certificate_ok = bool(np.all(certificate_minors(y, d) > 0))
    elif branch is Branch.SEMICONVEX:
        report.semiconvex_subcase = semiconvex_subcase(values)
    return report


def semiconvex_subcase(values: Sequence[float]) -> str:
    """'mild' when σ_k(λ|1) >= −σ_k/(2(k+2)² − 1) with k = n − 1, else 'strong'."""
    values = np.asarray(values, dtype=float)
    k = values.size - 1
    bound = -sigma(values, k) / (2.0 * (k + 2) ** 2 - 1.0)
    return "mild" if sigma(values, k, (0,)) >= bound else "strong"


def worst_direction(lam: EigenvalueVector, m: int, K: float, delta0: float) -> float:
    return float(worst_direction_batch(lam.values[None, :], np.array([m]), K, delta0)[0])


def _nonzero(values: np.ndarray) -> None:
    if np.any(values == 0.0):
        raise PreconditionError("identity needs all eigenvalues nonzero", {"lambda": values.tolist()})


def sigma_n_representation_check(lam: EigenvalueVector, xi: Sequence[float]) -> float:
    """|(cross + square with K=1) − closed form in Λ = −σ_n|.

    Closed form: Λ²/F (Σ ξ_i/λ_i²)² + F Σ ξ_i²/λ_i² + 2Λ Σ ξ_i²/λ_i³.
    """
    values = lam.values
    n = lam.n
    _nonzero(values)
    xi = np.asarray(xi, dtype=float)
    f = sigma(values, n - 1)
    if f == 0.0:
        raise PreconditionError("σ_{n-1} vanishes")
    terms = deficit_terms_batch(values[None, :], np.array([n]), xi[None, :])
    direct = float(terms["cross"][0] + terms["square"][0])
    big_lambda = -sigma(values, n)
    closed = (big_lambda ** 2 / f * np.sum(xi / values ** 2) ** 2
              + f * np.sum(xi ** 2 / values ** 2)
              + 2.0 * big_lambda * np.sum(xi ** 2 / values ** 3))
    return abs(direct - float(closed))


def fii_lambda_identity(lam: EigenvalueVector, i: int) -> float:
    """σ_{n-2}(λ|i) − (σ_{n-1}/λ_i − σ_n/λ_i²)."""
    values = lam.values
    n = lam.n
    if not 0 <= i < n:
        raise ArgumentError(f"index {i} outside [0, {n - 1}]")
    if values[i] == 0.0:
        raise PreconditionError(f"λ_{i + 1} = 0")
    table = esp_table(values, n)
    return sigma(values, n - 2, (i,)) - (table[n - 1] / values[i] - table[n] / values[i] ** 2)


def fiijj_lambda_identity(lam: EigenvalueVector, i: int, j: int) -> float:
    """σ_{n-3}(λ|ij) − (F/(λ_iλ_j) + Λ(λ_i+λ_j)/(λ_i²λ_j²)), Λ = −σ_n."""
    values = lam.values
    n = lam.n
    if i == j or not (0 <= i < n and 0 <= j < n):
        raise ArgumentError(f"need two distinct indices in [0, {n - 1}], got {i}, {j}")
    if values[i] == 0.0 or values[j] == 0.0:
        raise PreconditionError("identity needs λ_i, λ_j nonzero")
    table = esp_table(values, n)
    f, big_lambda = table[n - 1], -table[n]
    li, lj = values[i], values[j]
    closed = f / (li * lj) + big_lambda * (li + lj) / (li ** 2 * lj ** 2)
    return sigma(values, n - 3, (i, j)) - closed


def lambda_lower_bound(lam: EigenvalueVector, A: float) -> float:
    """Λ − A^{n-1} λ₁, nonnegative on Γ_{n-1} when λ_n <= −A."""
    values = lam.values
    n = lam.n
    if values[-1] > -A:
        raise PreconditionError(f"λ_n = {values[-1]:.6g} is above −A = {-A:.6g}")
    return -sigma(values, n) - A ** (n - 1) * values[0]
