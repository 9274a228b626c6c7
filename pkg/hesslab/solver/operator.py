#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Discrete operator σ_{n-1}(∇²u) − ψ(x, u, ∇u) on interior grid points, its
linearization and the sparse Newton Jacobian.

Second derivatives use the standard central stencils

    u_ii = (u(p + h e_i) − 2u(p) + u(p − h e_i)) / h²
    u_ij = (u(p+h e_i+h e_j) + u(p−h e_i−h e_j) − u(p+h e_i−h e_j) − u(p−h e_i+h e_j)) / (4h²)

which are exact on quadratics.
"""

import logging
from itertools import combinations
from typing import Tuple

import numpy as np
import scipy.sparse as sps

from ..algebra.spectral import f_gradient_batch, f_value_batch
from ..algebra.symmfunc import esp_table, in_cone_batch
from ..errors import DiscretizationError, PreconditionError
from ..models.solver import INTERIOR, ProblemSpec, ResidualField, ScalarField
from ..models.spectrum import SymMatrix
from .grid import Stencil, build_stencil, locate
from .psi import evaluate_psi

logger = logging.getLogger(__name__)


def _hessians_from(values: np.ndarray, st: Stencil, n: int, h: float) -> np.ndarray:
    u0 = values[st.center]
    out = np.empty((st.center.size, n, n))
    for i in range(n):
        out[:, i, i] = (values[st.plus[i]] - 2.0 * u0 + values[st.minus[i]]) / h ** 2
    for i, j in combinations(range(n), 2):
        key = (i, j)
        mixed = (values[st.pp[key]] + values[st.mm[key]] - values[st.pm[key]] - values[st.mp[key]]) / (4.0 * h ** 2)
        out[:, i, j] = out[:, j, i] = mixed
    return out


def _gradients_from(values: np.ndarray, st: Stencil, n: int, h: float) -> np.ndarray:
    return np.stack([(values[st.plus[i]] - values[st.minus[i]]) / (2.0 * h) for i in range(n)], axis=1)


def hessians(u: ScalarField) -> np.ndarray:
    """Discrete Hessians (M, n, n) at all interior points in flat order."""
    grid = u.grid
    return _hessians_from(u.flat, build_stencil(grid), grid.n, grid.h)


def gradients(u: ScalarField) -> np.ndarray:
    grid = u.grid
    return _gradients_from(u.flat, build_stencil(grid), grid.n, grid.h)


def _interior_position(u: ScalarField, p) -> int:
    flat = locate(u.grid, p)
    if u.grid.mask.reshape(-1)[flat] != INTERIOR:
        raise DiscretizationError(f"grid point {p} is not interior; its stencil leaves the mask")
    return int(np.searchsorted(u.grid.interior_flat, flat))


def hessian_at(u: ScalarField, p) -> SymMatrix:
    """Central-difference Hessian at one interior point (multi-index or flat index)."""
    pos = _interior_position(u, p)
    return SymMatrix(hessians(u)[pos])


def gradient_at(u: ScalarField, p) -> np.ndarray:
    pos = _interior_position(u, p)
    return gradients(u)[pos]


def _psi_terms(u: ScalarField, spec: ProblemSpec):
    grid = u.grid
    st = build_stencil(grid)
    x = grid.points(st.center)
    p = _gradients_from(u.flat, st, grid.n, grid.h)
    return evaluate_psi(spec.psi, x, u.flat[st.center], p)


def residual(u: ScalarField, spec: ProblemSpec) -> ResidualField:
    """F_value(∇²u) − ψ at interior points; inadmissible points are flagged, not clamped."""
    mats = hessians(u)
    values, eig = f_value_batch(mats, spec.k)
    psi, _, _ = _psi_terms(u, spec)
    admissible = in_cone_batch(eig, spec.k)
    return ResidualField(values=values - psi, admissible=admissible, eigenvalues=eig)


def admissibility_check(u: ScalarField) -> Tuple[float, float]:
    """(fraction of interior points in Γ_{n-1}, min over points of min_i σ_i)."""
    k = u.grid.n - 1
    if u.grid.interior_count == 0:
        return 1.0, float("nan")
    _, eig = f_value_batch(hessians(u), k)
    table = esp_table(eig, k)[:, 1:]
    fraction = float(np.mean(np.all(table > 0, axis=1)))
    return fraction, float(np.min(table))


def _coefficients(u: ScalarField, spec: ProblemSpec):
    mats = hessians(u)
    _, grads, eig = f_gradient_batch(mats, spec.k)
    if not np.all(in_cone_batch(eig, spec.k)):
        raise PreconditionError("linearization needs an admissible iterate")
    _, psi_u, psi_p = _psi_terms(u, spec)
    return grads, psi_u, psi_p


def linearized_apply(u: ScalarField, spec: ProblemSpec, du: ScalarField) -> np.ndarray:
    """Σ F^{ij}(∇²u) (∇²δu)_ij − ψ_u δu − ψ_p · ∇δu at interior points."""
    grads, psi_u, psi_p = _coefficients(u, spec)
    grid = u.grid
    st = build_stencil(grid)
    d2 = _hessians_from(du.flat, st, grid.n, grid.h)
    d1 = _gradients_from(du.flat, st, grid.n, grid.h)
    return (np.einsum("bij,bij->b", grads, d2) - psi_u * du.flat[st.center]
            - np.einsum("bi,bi->b", psi_p, d1))


def assemble_jacobian(u: ScalarField, spec: ProblemSpec) -> sps.csr_matrix:
    """Sparse matrix of linearized_apply over interior unknowns (boundary δu = 0)."""
    grads, psi_u, psi_p = _coefficients(u, spec)
    grid = u.grid
    st = build_stencil(grid)
    n, h = grid.n, grid.h
    m = st.center.size
    row_of = np.full(grid.size, -1, dtype=np.int64)
    row_of[st.center] = np.arange(m)
    rows_all = np.arange(m)

    rows, cols, data = [], [], []

    def add(targets: np.ndarray, coef: np.ndarray) -> None:
        col = row_of[targets]
        keep = col >= 0
        rows.append(rows_all[keep])
        cols.append(col[keep])
        data.append(coef[keep])

    center = -psi_u.copy()
    for i in range(n):
        fii = grads[:, i, i] / h ** 2
        center -= 2.0 * fii
        add(st.plus[i], fii - psi_p[:, i] / (2.0 * h))
        add(st.minus[i], fii + psi_p[:, i] / (2.0 * h))
    for i, j in combinations(range(n), 2):
        key = (i, j)
        fij = 2.0 * grads[:, i, j] / (4.0 * h ** 2)
        add(st.pp[key], fij)
        add(st.mm[key], fij)
        add(st.pm[key], -fij)
        add(st.mp[key], -fij)
    add(st.center, center)

    matrix = sps.coo_matrix((np.concatenate(data), (np.concatenate(rows), np.concatenate(cols))), shape=(m, m))
    return matrix.tocsr()
