#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Matrix-coordinate view of F(W) = σ_k(λ(W)): eigendecomposition of small
symmetric matrices by cyclic Jacobi rotations, first derivatives
F^{ij} = Σ_p σ_{k-1}(λ|p) v_p v_pᵀ and the second-derivative quadratic form.
"""

import logging
from typing import Tuple

import numpy as np

from ..config import JACOBI_MAX_SWEEPS, JACOBI_TOL, TIE_RTOL
from ..errors import ArgumentError, NumericalError
from ..models.spectrum import EigenSystem, EigenvalueVector, SymMatrix
from .symmfunc import gradient_batch, hessian_batch, sigma, sigma_batch, sigma_gradient, sigma_hessian

logger = logging.getLogger(__name__)

SIGN_FLOOR = 1e-12


def _rotate(a: np.ndarray, v: np.ndarray, p: int, q: int) -> None:
    """Annihilate a[:, p, q] in place for every matrix where it is nonzero."""
    apq = a[:, p, q]
    idx = np.nonzero(apq != 0.0)[0]
    if idx.size == 0:
        return
    sub = a[idx]
    vs = v[idx]
    app = sub[:, p, p]
    aqq = sub[:, q, q]
    with np.errstate(over="ignore"):
        tau = (aqq - app) / (2.0 * sub[:, p, q])
    # |tau| = inf gives t = 0
    t = np.where(tau >= 0, 1.0, -1.0) / (np.abs(tau) + np.hypot(1.0, tau))
    c = 1.0 / np.sqrt(1.0 + t * t)
    s = t * c
    c1 = c[:, None]
    s1 = s[:, None]

    rp = sub[:, p, :].copy()
    rq = sub[:, q, :].copy()
    sub[:, p, :] = c1 * rp - s1 * rq
    sub[:, q, :] = s1 * rp + c1 * rq
    cp = sub[:, :, p].copy()
    cq = sub[:, :, q].copy()
    sub[:, :, p] = c1 * cp - s1 * cq
    sub[:, :, q] = s1 * cp + c1 * cq
    sub[:, p, q] = 0.0
    sub[:, q, p] = 0.0

    vp = vs[:, :, p].copy()
    vq = vs[:, :, q].copy()
    vs[:, :, p] = c1 * vp - s1 * vq
    vs[:, :, q] = s1 * vp + c1 * vq

    a[idx] = sub
    v[idx] = vs


def jacobi_eigh_batch(mats: np.ndarray, max_sweeps: int = JACOBI_MAX_SWEEPS,
                      tol: float = JACOBI_TOL) -> Tuple[np.ndarray, np.ndarray]:
    """Eigen-decompose a stack of symmetric matrices of shape (N, n, n).

    Returns eigenvalues (N, n) in descending order and frames (N, n, n) whose
    rows are unit eigenvectors with their first nonzero component positive.
    The sweep visits pairs (p, q), p < q, in lexicographic order.
    """
    a = np.array(mats, dtype=float, copy=True)
    if a.ndim != 3 or a.shape[1] != a.shape[2]:
        raise ArgumentError(f"expected a stack of square matrices, got shape {a.shape}")
    count, n, _ = a.shape
    v = np.broadcast_to(np.eye(n), a.shape).copy()
    if count == 0:
        return np.zeros((0, n)), v

    fro2 = np.sum(a * a, axis=(1, 2))
    off_mask = ~np.eye(n, dtype=bool)
    pairs = [(p, q) for p in range(n - 1) for q in range(p + 1, n)]

    for sweep in range(max_sweeps + 1):
        off2 = np.sum(a[:, off_mask] ** 2, axis=1)
        pending = off2 > (tol * tol) * fro2
        if not np.any(pending):
            logger.debug("Jacobi converged after %d sweeps for %d matrices", sweep, count)
            break
        if sweep == max_sweeps:
            worst = int(np.argmax(off2 / np.where(fro2 > 0, fro2, 1.0)))
            raise NumericalError(
                f"Jacobi iteration did not converge in {max_sweeps} sweeps",
                {"matrix": np.asarray(mats)[worst].tolist()},
            )
        for p, q in pairs:
            _rotate(a, v, p, q)

    eig = np.diagonal(a, axis1=1, axis2=2).copy()
    order = np.argsort(-eig, axis=1, kind="stable")
    eig = np.take_along_axis(eig, order, axis=1)
    v = np.take_along_axis(v, order[:, None, :], axis=2)
    frames = np.transpose(v, (0, 2, 1)).copy()

    lead = np.argmax(np.abs(frames) > SIGN_FLOOR, axis=2)
    lead_vals = np.take_along_axis(frames, lead[:, :, None], axis=2)[:, :, 0]
    frames *= np.where(lead_vals < 0, -1.0, 1.0)[:, :, None]
    return eig, frames


def eigen_decompose(w: SymMatrix) -> EigenSystem:
    """Eigenvalues (descending) and orthonormal eigenvector frame of W."""
    eig, frames = jacobi_eigh_batch(w.entries[None, :, :])
    return EigenSystem(EigenvalueVector(eig[0], sorted=True), frames[0])


def _check_k(k: int, n: int) -> None:
    if k < 1 or k > n:
        raise ArgumentError(f"order k={k} outside [1, {n}]")


def f_value(w: SymMatrix, k: int) -> float:
    """F(W) = σ_k(λ(W))."""
    _check_k(k, w.dim)
    return sigma(eigen_decompose(w).eigenvalues, k)


def f_gradient_matrix(w: SymMatrix, k: int) -> SymMatrix:
    """F^{ij} = ∂σ_k/∂w_ij = Σ_p σ_{k-1}(λ|p) v_p v_pᵀ."""
    _check_k(k, w.dim)
    system = eigen_decompose(w)
    g = sigma_gradient(system.eigenvalues, k)
    return SymMatrix(system.frame.T @ np.diag(g) @ system.frame)


def f_second_quadratic_form(w: SymMatrix, k: int, a: SymMatrix) -> float:
    """Σ_{ij,st} ∂²F/∂w_ij∂w_st a_ij a_st evaluated in the eigenframe of W.

    Equal to Σ_{p≠q} f_pq ã_pp ã_qq + 2 Σ_{p<q} (f_p − f_q)/(λ_p − λ_q) ã_pq².
    For clustered eigenvalues the divided difference is replaced by its limit
    −σ_{k-2}(λ|pq) (f_p − f_q = (λ_q − λ_p) σ_{k-2}(λ|pq) exactly).
    """
    if a.dim != w.dim:
        raise ArgumentError(f"dimension mismatch: W is {w.dim}, A is {a.dim}")
    n = w.dim
    _check_k(k, n)
    system = eigen_decompose(w)
    lam = system.eigenvalues.values
    at = system.to_eigenframe(a)
    g = sigma_gradient(lam, k)
    f2 = sigma_hessian(lam, k) if k >= 2 else np.zeros((n, n))

    diag = np.diag(at)
    total = float(diag @ f2 @ diag)
    for p in range(n):
        for q in range(p + 1, n):
            gap = lam[p] - lam[q]
            if abs(gap) < TIE_RTOL * max(1.0, abs(lam[p])):
                quotient = -f2[p, q]
            else:
                quotient = (g[p] - g[q]) / gap
            total += 2.0 * quotient * at[p, q] ** 2
    return total


def f_value_batch(mats: np.ndarray, k: int) -> Tuple[np.ndarray, np.ndarray]:
    """σ_k(λ(W)) for a stack of matrices; also returns the eigenvalues."""
    eig, _ = jacobi_eigh_batch(mats)
    _check_k(k, eig.shape[1])
    return sigma_batch(eig, k), eig


def f_gradient_batch(mats: np.ndarray, k: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Values, gradient matrices F^{ij} (N, n, n) and eigenvalues for a stack."""
    eig, frames = jacobi_eigh_batch(mats)
    _check_k(k, eig.shape[1])
    g = gradient_batch(eig, k)
    grads = np.einsum("bpi,bp,bpj->bij", frames, g, frames)
    return sigma_batch(eig, k), grads, eig


def f_second_batch(mats: np.ndarray, k: int, dirs: np.ndarray) -> np.ndarray:
    """Batched f_second_quadratic_form for stacks W (N, n, n) and A (N, n, n)."""
    eig, frames = jacobi_eigh_batch(mats)
    n = eig.shape[1]
    _check_k(k, n)
    at = np.einsum("bpi,bij,bqj->bpq", frames, dirs, frames)
    g = gradient_batch(eig, k)
    f2 = hessian_batch(eig, k) if k >= 2 else np.zeros_like(at)
    diag = np.einsum("bpp->bp", at)
    total = np.einsum("bp,bpq,bq->b", diag, f2, diag)
    for p in range(n):
        for q in range(p + 1, n):
            gap = eig[:, p] - eig[:, q]
            tied = np.abs(gap) < TIE_RTOL * np.maximum(1.0, np.abs(eig[:, p]))
            quotient = np.where(tied, -f2[:, p, q], (g[:, p] - g[:, q]) / np.where(tied, 1.0, gap))
            total += 2.0 * quotient * at[:, p, q] ** 2
    return total
