#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Elementary symmetric functions σ_k, their exclusions and eigenvalue derivatives,
and Garding-cone predicates.

All evaluation goes through the prefix recurrence

    e_j(prefix + [λ_i]) = e_j(prefix) + λ_i * e_{j-1}(prefix)

so no polynomial division or subtraction-based rearrangement is ever used.
Indices are 0-based: ``sigma(lam, 1, {0})`` is σ_1(λ|1) in the usual notation.

Scalar functions accept an :class:`EigenvalueVector` or any 1-D sequence.
The ``*_batch`` variants take arrays of shape (N, n); there an excluded entry
is zeroed instead of removed, which leaves the recurrence unchanged because a
zero contributes nothing to any e_j.
"""

from math import comb
from typing import Iterable, Sequence, Tuple, Union

import numpy as np

from ..config import CONE_TOLERANCE
from ..errors import ArgumentError, PreconditionError
from ..models.spectrum import ConeMembership, EigenvalueVector

SpectrumLike = Union[EigenvalueVector, Sequence[float], np.ndarray]


def _values(lam: SpectrumLike) -> np.ndarray:
    if isinstance(lam, EigenvalueVector):
        return lam.values
    return EigenvalueVector.of(lam).values


def _check_order(k: int, n: int, lo: int = 0) -> None:
    if not isinstance(k, (int, np.integer)) or k < lo or k > n:
        raise ArgumentError(f"order k={k} outside [{lo}, {n}]")


def _check_indices(excluded: Iterable[int], n: int) -> Tuple[int, ...]:
    out = tuple(sorted(set(int(i) for i in excluded)))
    for i in out:
        if i < 0 or i >= n:
            raise ArgumentError(f"excluded index {i} outside [0, {n - 1}]")
    return out


def esp_table(values: np.ndarray, k: int) -> np.ndarray:
    """Return e_0..e_k of the entries along the last axis (any leading shape)."""
    values = np.asarray(values, dtype=float)
    table = np.zeros(values.shape[:-1] + (k + 1,))
    table[..., 0] = 1.0
    if k == 0:
        return table
    for i in range(values.shape[-1]):
        table[..., 1:] = table[..., 1:] + values[..., i:i + 1] * table[..., :-1]
    return table


def sigma_table(lam: SpectrumLike, k: int, excluded: Iterable[int] = ()) -> np.ndarray:
    """σ_0..σ_k over the non-excluded entries."""
    values = _values(lam)
    n = values.size
    _check_order(k, n)
    drop = _check_indices(excluded, n)
    surviving = np.delete(values, drop) if drop else values
    return esp_table(surviving, k)


def sigma(lam: SpectrumLike, k: int, excluded: Iterable[int] = ()) -> float:
    """σ_k of the entries not in ``excluded``; 0 when k exceeds the surviving count."""
    return float(sigma_table(lam, k, excluded)[k])


def sigma_gradient(lam: SpectrumLike, k: int) -> np.ndarray:
    """∂σ_k/∂λ_i = σ_{k-1}(λ|i)."""
    values = _values(lam)
    n = values.size
    _check_order(k, n, lo=1)
    return np.array([sigma(values, k - 1, (i,)) for i in range(n)])


def sigma_hessian(lam: SpectrumLike, k: int) -> np.ndarray:
    """∂²σ_k/∂λ_p∂λ_q = σ_{k-2}(λ|pq) off the diagonal, 0 on it."""
    values = _values(lam)
    n = values.size
    _check_order(k, n, lo=2)
    out = np.zeros((n, n))
    for p in range(n):
        for q in range(p + 1, n):
            out[p, q] = out[q, p] = sigma(values, k - 2, (p, q))
    return out


def in_cone(lam: SpectrumLike, k: int, tol: float = CONE_TOLERANCE) -> ConeMembership:
    """Test σ_1..σ_k > tol in order, stopping at the first failure."""
    values = _values(lam)
    _check_order(k, values.size, lo=1)
    table = esp_table(values, k)
    margins = []
    for order in range(1, k + 1):
        margins.append(float(table[order]))
        if table[order] <= tol:
            return ConeMembership(k=k, member=False, first_failing_order=order, margins=tuple(margins))
    return ConeMembership(k=k, member=True, first_failing_order=None, margins=tuple(margins))


def cone_nesting(lam: SpectrumLike, k: int) -> bool:
    """Membership in Γ_k implies membership in every Γ_j, j <= k."""
    if not in_cone(lam, k).member:
        return True
    return all(in_cone(lam, j).member for j in range(1, k))


def _require_member(values: np.ndarray, k: int) -> None:
    membership = in_cone(values, k)
    if not membership.member:
        raise PreconditionError(
            f"λ is not in Γ_{k}: σ_{membership.first_failing_order} = {membership.margins[-1]:.6g}",
            {"lambda": values.tolist(), "k": k},
        )


def newton_maclaurin_gap(lam: SpectrumLike, m: int, l: int, r: int, s: int) -> float:
    """RHS − LHS of the generalized Newton–MacLaurin inequality (≥ 0 on Γ_m).

    LHS = [(σ_m/C(n,m)) / (σ_l/C(n,l))]^(1/(m−l)),
    RHS = [(σ_r/C(n,r)) / (σ_s/C(n,s))]^(1/(r−s)).
    """
    values = _values(lam)
    n = values.size
    if not (m > l >= 0 and r > s >= 0 and m >= r and l >= s and m <= n):
        raise ArgumentError(f"invalid Newton–MacLaurin indices (m,l,r,s)=({m},{l},{r},{s})")
    _require_member(values, m)
    table = esp_table(values, m)

    def ratio(a: int, b: int) -> float:
        num = table[a] / comb(n, a)
        den = table[b] / comb(n, b)
        return float((num / den) ** (1.0 / (a - b)))

    return ratio(r, s) - ratio(m, l)


def sigma_quotient(lam: SpectrumLike, k: int) -> float:
    """q_k = σ_k / σ_{k-1} on Γ_k."""
    values = _values(lam)
    _check_order(k, values.size, lo=1)
    table = esp_table(values, k)
    if table[k - 1] <= 0:
        raise PreconditionError(f"σ_{k - 1} = {table[k - 1]:.6g} is not positive")
    return float(table[k] / table[k - 1])


def rescale(lam: SpectrumLike, k: int, target: float) -> Tuple[EigenvalueVector, float]:
    """Scale λ by t > 0 so that σ_k(tλ) = target."""
    values = _values(lam)
    _check_order(k, values.size, lo=1)
    if not target > 0:
        raise ArgumentError(f"rescale target must be positive, got {target}")
    _require_member(values, k)
    t = (target / sigma(values, k)) ** (1.0 / k)
    sorted_flag = lam.sorted if isinstance(lam, EigenvalueVector) else False
    return EigenvalueVector(values * t, sorted=sorted_flag), float(t)


def root_gradient(lam: SpectrumLike, k: int) -> np.ndarray:
    """Eigenvalue gradient of the concave function σ_k^(1/k) on Γ_k."""
    values = _values(lam)
    _require_member(values, k)
    s = sigma(values, k)
    return sigma_gradient(values, k) * (s ** (1.0 / k - 1.0) / k)


# Batched evaluation over arrays of shape (N, n)

def _batch(lams: np.ndarray) -> np.ndarray:
    lams = np.asarray(lams, dtype=float)
    if lams.ndim != 2 or lams.shape[1] < 2:
        raise ArgumentError(f"batch must have shape (N, n>=2), got {lams.shape}")
    return lams


def sigma_batch(lams: np.ndarray, k: int, excluded: Iterable[int] = ()) -> np.ndarray:
    lams = _batch(lams)
    n = lams.shape[1]
    _check_order(k, n)
    drop = _check_indices(excluded, n)
    if drop:
        lams = lams.copy()
        lams[:, list(drop)] = 0.0
    return esp_table(lams, k)[:, k]


def gradient_batch(lams: np.ndarray, k: int) -> np.ndarray:
    lams = _batch(lams)
    n = lams.shape[1]
    _check_order(k, n, lo=1)
    return np.stack([sigma_batch(lams, k - 1, (i,)) for i in range(n)], axis=1)


def hessian_batch(lams: np.ndarray, k: int) -> np.ndarray:
    lams = _batch(lams)
    n = lams.shape[1]
    _check_order(k, n, lo=2)
    out = np.zeros((lams.shape[0], n, n))
    for p in range(n):
        for q in range(p + 1, n):
            out[:, p, q] = out[:, q, p] = sigma_batch(lams, k - 2, (p, q))
    return out


def in_cone_batch(lams: np.ndarray, k: int, tol: float = CONE_TOLERANCE) -> np.ndarray:
    lams = _batch(lams)
    _check_order(k, lams.shape[1], lo=1)
    table = esp_table(lams, k)
    return np.all(table[:, 1:] > tol, axis=1)
