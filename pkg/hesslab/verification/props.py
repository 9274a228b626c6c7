#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Property suite for the symmetric-function layer and its matrix counterpart.

Every check maps a batch of samples to relative margins: a margin >= 0 means
the property holds at that sample. Identities use margin = tol − |err|/scale
with scale = σ_k(|λ|) (or its analogue); inequalities use the signed gap over
the same kind of scale plus the slack.
"""

import logging
from math import comb
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
from tqdm import tqdm

from .. import config
from ..algebra.spectral import f_gradient_batch, f_second_batch, f_value_batch
from ..algebra.symmfunc import esp_table, gradient_batch, in_cone_batch, sigma_batch
from ..concavity.sampler import sample_gamma_k_batch
from ..config import (
    FD_FIRST_RTOL, FD_SECOND_RTOL, FD_STEP, IDENTITY_RTOL, INEQUALITY_SLACK, PROPS_DIMENSIONS,
    SPECTRAL_RTOL, SPECTRAL_SAMPLES, WORST_ROWS,
)
from ..errors import ConfigError
from ..models.verification import PropertyResult
from ..writer import write_csv

logger = logging.getLogger(__name__)

HOMOGENEITY_FACTORS = (0.5, 2.0, 10.0)
TINY = 1e-300

Margins = Tuple[np.ndarray, Optional[float]]


class Context:
    """One (n, k) sample batch with cached tables."""

    def __init__(self, lams: np.ndarray, k: int, fault: Optional[str] = None):
        self.lams = lams
        self.n = lams.shape[1]
        self.k = k
        self.fault = fault
        self.table = esp_table(lams, self.n)
        self.abs_table = esp_table(np.abs(lams), self.n)
        self._grads: Dict[int, np.ndarray] = {}

    def sigma(self, order: int) -> np.ndarray:
        if order < 0 or order > self.n:
            return np.zeros(self.lams.shape[0])
        return self.table[:, order]

    def scale(self, order: int) -> np.ndarray:
        if order < 0 or order > self.n:
            return np.ones(self.lams.shape[0])
        return np.maximum(self.abs_table[:, order], TINY)

    def grad(self, order: int) -> np.ndarray:
        """σ_{order-1}(λ|i) for every i."""
        if order not in self._grads:
            self._grads[order] = gradient_batch(self.lams, order)
        return self._grads[order]


def _identity(err: np.ndarray, scale: np.ndarray, tol: float = IDENTITY_RTOL) -> np.ndarray:
    return tol - np.abs(err) / scale


def _inequality(gap: np.ndarray, scale: np.ndarray, slack: float = INEQUALITY_SLACK) -> np.ndarray:
    return gap / scale + slack


def check_decomposition(ctx: Context) -> Margins:
    """σ_k = σ_k(λ|i) + λ_i σ_{k-1}(λ|i) for every i."""
    k = ctx.k
    total = -ctx.sigma(k) if ctx.fault == "decomposition" else ctx.sigma(k)
    out = np.full(ctx.lams.shape[0], np.inf)
    for i in range(ctx.n):
        rest = sigma_batch(ctx.lams, k, (i,))
        below = sigma_batch(ctx.lams, k - 1, (i,))
        out = np.minimum(out, _identity(total - rest - ctx.lams[:, i] * below, ctx.scale(k)))
    return out, None


def check_summation(ctx: Context) -> Margins:
    """Σ_i σ_{k-1}(λ|i) = (n − k + 1) σ_{k-1}."""
    k, n = ctx.k, ctx.n
    err = ctx.grad(k).sum(axis=1) - (n - k + 1) * ctx.sigma(k - 1)
    return _identity(err, n * ctx.scale(k - 1)), None


def check_gradient_sum(ctx: Context) -> Margins:
    """Σ_i ∂σ_k^{1/k}/∂λ_i >= C(n,k)^{1/k}."""
    k, n = ctx.k, ctx.n
    s = ctx.sigma(k)
    total = s ** (1.0 / k - 1.0) / k * ctx.grad(k).sum(axis=1)
    bound = comb(n, k) ** (1.0 / k)
    return _inequality(total - bound, np.full_like(s, bound)), None


def check_midpoint_concavity(ctx: Context) -> Margins:
    """σ_k^{1/k}((λ+μ)/2) >= average of σ_k^{1/k}(λ), σ_k^{1/k}(μ)."""
    k = ctx.k
    other = np.roll(ctx.lams, 1, axis=0)
    f = ctx.sigma(k) ** (1.0 / k)
    g = sigma_batch(other, k) ** (1.0 / k)
    mid = sigma_batch(0.5 * (ctx.lams + other), k) ** (1.0 / k)
    return _inequality(mid - 0.5 * (f + g), 1.0 + np.abs(mid)), None


def check_ordering(ctx: Context) -> Margins:
    """0 < σ_{k-1}(λ|1) <= σ_{k-1}(λ|2) <= ... for descending λ."""
    g = ctx.grad(ctx.k)
    scale = ctx.scale(ctx.k - 1)[:, None]
    steps = np.diff(g, axis=1) / scale
    lowest = np.min(np.concatenate([g / scale, steps], axis=1), axis=1)
    return lowest + INEQUALITY_SLACK, None


def check_negative_bound(ctx: Context) -> Margins:
    """−λ_i <= (n−k)/k λ₁ whenever λ_i <= 0."""
    k, n = ctx.k, ctx.n
    lam = ctx.lams
    bound = (n - k) / k * lam[:, :1]
    gap = np.where(lam <= 0, bound + lam, np.inf)
    return _inequality(np.min(gap, axis=1), np.abs(lam[:, 0])), None


def check_count_and_tail(ctx: Context) -> Margins:
    """At most n−k negative entries, λ_k + ... + λ_n > 0 and |λ_i| <= n λ_k for i > k."""
    k, n = ctx.k, ctx.n
    lam = ctx.lams
    scale = np.abs(lam[:, 0])
    count_ok = np.where(np.sum(lam < 0, axis=1) <= n - k, np.inf, -1.0)
    tail = lam[:, k - 1:].sum(axis=1)
    size = n * lam[:, k - 1:k] - np.abs(lam[:, k:]) if k < n else np.full((lam.shape[0], 1), np.inf)
    worst = np.minimum(tail, np.min(size, axis=1))
    return np.minimum(count_ok, _inequality(worst, scale)), None


def check_product_bound(ctx: Context) -> Margins:
    """σ_k <= C(n,k) λ₁ ⋯ λ_k."""
    k, n = ctx.k, ctx.n
    prod = np.prod(ctx.lams[:, :k], axis=1)
    return _inequality(comb(n, k) * prod - ctx.sigma(k), ctx.scale(k)), None


def check_lower_product_bound(ctx: Context, order: int) -> Margins:
    """σ_l >= C(n,l) λ₁ ⋯ λ_l for l < k; the empirical C(n,l) is reported."""
    ratio = ctx.sigma(order) / np.prod(ctx.lams[:, :order], axis=1)
    return ratio, float(np.min(ratio))


def check_lambda1_ratio(ctx: Context) -> Margins:
    """λ₁ σ_{k-1}(λ|1) / σ_k stays positive; the empirical minimum is reported."""
    k = ctx.k
    ratio = ctx.lams[:, 0] * ctx.grad(k)[:, 0] / ctx.sigma(k)
    return ratio, float(np.min(ratio))


def check_weighted_square(ctx: Context) -> Margins:
    """Σ λ_i² σ_{k-1}(λ|i) >= (k/n) σ_1 σ_k."""
    k, n = ctx.k, ctx.n
    lhs = np.sum(ctx.lams ** 2 * ctx.grad(k), axis=1)
    rhs = k / n * ctx.sigma(1) * ctx.sigma(k)
    scale = np.maximum(np.sum(ctx.lams ** 2 * np.abs(ctx.grad(k)), axis=1), TINY)
    return _inequality(lhs - rhs, scale), None


def check_homogeneity(ctx: Context) -> Margins:
    """σ_k(tλ) = t^k σ_k(λ)."""
    k = ctx.k
    out = np.full(ctx.lams.shape[0], np.inf)
    for t in HOMOGENEITY_FACTORS:
        err = sigma_batch(t * ctx.lams, k) - t ** k * ctx.sigma(k)
        out = np.minimum(out, _identity(err, t ** k * ctx.scale(k)))
    return out, None


def _nm_ratio(ctx: Context, a: int, b: int) -> np.ndarray:
    n = ctx.n
    return ((ctx.sigma(a) / comb(n, a)) / (ctx.sigma(b) / comb(n, b))) ** (1.0 / (a - b))


def newton_maclaurin_indices(k: int) -> List[Tuple[int, int, int, int]]:
    """Index tuples (m, l, r, s) with m = k."""
    out = [(k, 0, 1, 0)]
    if k >= 2:
        out += [(k, k - 1, 1, 0), (k, k - 1, k - 1, k - 2)]
    return out


def check_newton_maclaurin(ctx: Context) -> Margins:
    """[(σ_m/C)/(σ_l/C)]^{1/(m−l)} <= [(σ_r/C)/(σ_s/C)]^{1/(r−s)} on Γ_m."""
    out = np.full(ctx.lams.shape[0], np.inf)
    for m, l, r, s in newton_maclaurin_indices(ctx.k):
        rhs = _nm_ratio(ctx, r, s)
        gap = rhs - _nm_ratio(ctx, m, l)
        out = np.minimum(out, _inequality(gap, np.maximum(np.abs(rhs), TINY)))
    return out, None


def check_cone_nesting(ctx: Context) -> Margins:
    """Γ_k ⊂ Γ_j for every j < k."""
    ok = np.ones(ctx.lams.shape[0], dtype=bool)
    for j in range(1, ctx.k):
        ok &= in_cone_batch(ctx.lams, j)
    return np.where(ok, 1.0, -1.0), None


SYMMETRIC_CHECKS: Dict[str, Callable[[Context], Margins]] = {
    "decomposition": check_decomposition,
    "summation": check_summation,
    "gradient_sum": check_gradient_sum,
    "midpoint_concavity": check_midpoint_concavity,
    "ordering": check_ordering,
    "negative_bound": check_negative_bound,
    "count_and_tail": check_count_and_tail,
    "product_bound": check_product_bound,
    "lambda1_ratio": check_lambda1_ratio,
    "weighted_square": check_weighted_square,
    "homogeneity": check_homogeneity,
    "newton_maclaurin": check_newton_maclaurin,
    "cone_nesting": check_cone_nesting,
}


# Matrix-coordinate checks

def separated_matrices(rng: np.random.Generator, n: int, count: int, gap: float = 0.1,
                       floor: float = 1.0) -> Tuple[np.ndarray, np.ndarray]:
    """Symmetric W = Qᵀ diag(μ) Q with Haar-like Q.

    Eigenvalues are at least `floor` and pairwise at least `gap` apart.
    """
    steps = gap + rng.uniform(0.0, 2.0 * gap, (count, n))
    mu = np.cumsum(steps, axis=1) - steps[:, :1]
    mu = mu + floor + rng.uniform(0.0, 0.5, (count, 1))
    q = random_orthogonal(rng, n, count)
    w = np.einsum("bji,bj,bjk->bik", q, mu, q)
    return 0.5 * (w + np.transpose(w, (0, 2, 1))), mu


def random_orthogonal(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    z = rng.standard_normal((count, n, n))
    q, r = np.linalg.qr(z)
    signs = np.sign(np.einsum("bii->bi", r))
    signs[signs == 0] = 1.0
    return q * signs[:, None, :]


def random_directions(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    a = rng.standard_normal((count, n, n))
    a = 0.5 * (a + np.transpose(a, (0, 2, 1)))
    return a / np.linalg.norm(a, axis=(1, 2), keepdims=True)


def spectral_checks(rng: np.random.Generator, n: int, k: int, count: int) -> Dict[str, Tuple[np.ndarray, np.ndarray]]:
    """Finite-difference, invariance and ordering checks; returns margins and sample spectra."""
    w, mu = separated_matrices(rng, n, count)
    a = random_directions(rng, n, count)
    h = FD_STEP
    f0, grads, eig = f_gradient_batch(w, k)
    fp, _ = f_value_batch(w + h * a, k)
    fm, _ = f_value_batch(w - h * a, k)
    table = esp_table(np.abs(eig), k)
    scale = np.maximum(table[:, k], TINY)
    out: Dict[str, Tuple[np.ndarray, np.ndarray]] = {}

    # ‖A‖_F = 1: ‖∇F‖_F bounds ∇F·A, n σ_{k-2}(|λ|) sizes A·∇²F·A
    first = np.einsum("bij,bij->b", grads, a)
    fd1 = (fp - fm) / (2.0 * h)
    grad_norm = np.maximum(np.linalg.norm(grads, axis=(1, 2)), TINY)
    out["fd_first_derivative"] = (FD_FIRST_RTOL - np.abs(fd1 - first) / grad_norm, eig)

    if k >= 2:
        second = f_second_batch(w, k, a)
        fd2 = (fp - 2.0 * f0 + fm) / h ** 2
        second_scale = np.maximum(np.abs(second), n * table[:, k - 2])
        out["fd_second_derivative"] = (FD_SECOND_RTOL - np.abs(fd2 - second) / second_scale, eig)

    q = random_orthogonal(rng, n, count)
    rotated = np.einsum("bji,bjk,bkl->bil", q, w, q)
    fr, _ = f_value_batch(rotated, k)
    out["spectral_invariance"] = (SPECTRAL_RTOL - np.abs(fr - f0) / scale, eig)

    # ordering of ∂σ_k^{1/k}/∂λ_i on Γ_k members
    member = in_cone_batch(eig, k)
    if np.any(member):
        e = eig[member]
        g = gradient_batch(e, k) * (sigma_batch(e, k) ** (1.0 / k - 1.0) / k)[:, None]
        steps = np.diff(g, axis=1) / np.maximum(np.abs(g[:, -1:]), TINY)
        out["root_gradient_ordering"] = (np.min(steps, axis=1) + INEQUALITY_SLACK, e)
    return out


def _worst(margins: np.ndarray, lams: np.ndarray, count: int = WORST_ROWS) -> List[Tuple[float, Tuple[float, ...]]]:
    order = np.argsort(margins, kind="stable")[:count]
    return [(float(margins[i]), tuple(float(v) for v in lams[i])) for i in order]


def _result(name: str, n: int, k: int, margins: np.ndarray, lams: np.ndarray,
            statistic: Optional[float] = None) -> PropertyResult:
    finite = np.where(np.isnan(margins), -np.inf, margins)
    low = float(np.min(finite)) if finite.size else float("inf")
    return PropertyResult(name=name, n=n, k=k, samples=int(margins.size), min_margin=low,
                          passed=bool(low >= 0.0), worst=_worst(finite, lams), statistic=statistic)


def draw_gamma_k(rng: np.random.Generator, n: int, k: int, count: int) -> np.ndarray:
    """Descending Γ_k samples, half of them within 1e−2 of the cone boundary along their ray."""
    near = count // 2
    parts = []
    for want, near_boundary in ((count - near, False), (near, True)):
        got = 0
        while got < want:
            batch = sample_gamma_k_batch(rng, n, k, want - got, near_boundary=near_boundary)
            parts.append(batch)
            got += batch.shape[0]
    lams = np.concatenate(parts)[:count]
    return -np.sort(-lams, axis=1)


def _jobs(dimensions: Sequence[int]) -> Iterator[Tuple[int, int]]:
    for n in dimensions:
        for k in range(1, n + 1):
            yield n, k


def run_property_suite(seed: int, samples: int, dimensions: Sequence[int] = PROPS_DIMENSIONS,
                       fault: Optional[str] = None, spectral_samples: int = SPECTRAL_SAMPLES,
                       progress: Optional[bool] = None) -> List[PropertyResult]:
    """Run every symmetric-function and spectral property for each (n, k)."""
    if samples <= 0:
        raise ConfigError(f"samples per property must be positive, got {samples}")
    if fault is not None and fault not in SYMMETRIC_CHECKS:
        raise ConfigError(f"unknown fault target {fault!r}")
    progress = config.SHOW_PROGRESS if progress is None else progress
    jobs = list(_jobs(dimensions))
    seeds = np.random.SeedSequence(seed).spawn(len(jobs))
    results: List[PropertyResult] = []

    for (n, k), seq in tqdm(list(zip(jobs, seeds)), desc="properties", unit="(n,k)", disable=not progress):
        rng = np.random.default_rng(seq)
        lams = draw_gamma_k(rng, n, k, samples)
        ctx = Context(lams, k, fault)
        for name, check in SYMMETRIC_CHECKS.items():
            margins, statistic = check(ctx)
            results.append(_result(name, n, k, margins, lams, statistic))
        for order in range(1, k):
            margins, statistic = check_lower_product_bound(ctx, order)
            results.append(_result(f"lower_product_bound_l{order}", n, k, margins, lams, statistic))
        count = min(spectral_samples, samples)
        for name, (margins, spectra) in spectral_checks(rng, n, k, count).items():
            results.append(_result(name, n, k, margins, spectra))
        logger.debug("n=%d k=%d: %d samples checked", n, k, samples)

    failed = [r for r in results if not r.passed]
    logger.info("Property suite: %d checks, %d failed", len(results), len(failed))
    return results


def write_worst_rows(results: Sequence[PropertyResult], out_dir: str) -> List[str]:
    """One CSV per property with the worst samples of every (n, k)."""
    by_name: Dict[str, List[PropertyResult]] = {}
    for r in results:
        by_name.setdefault(r.name, []).append(r)
    width = max((r.n for r in results), default=0)
    header = ["n", "k", "margin", "passed"] + [f"lambda_{i + 1}" for i in range(width)]
    paths = []
    for name, group in by_name.items():
        rows = []
        for r in group:
            for margin, values in r.worst:
                rows.append([r.n, r.k, margin, r.passed] + list(values) + [None] * (width - len(values)))
        path = f"{out_dir}/props_{name}.csv"
        write_csv(path, header, rows)
        paths.append(path)
    return paths
