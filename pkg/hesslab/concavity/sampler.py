#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Seeded samplers for Γ_k spectra and admissible directions ξ.

For k = n − 1 the cone boundary along the last coordinate is explicit: with
positive μ ∈ R^{n-1} the vector (μ, x) lies in Γ_{n-1} iff x > −x*, where
x* = σ_{n-1}(μ)/σ_{n-2}(μ) = 1/Σ(1/μ_i). Profiles place x relative to −x*.
General k falls back to bisection along a ray from a positive vector.
"""

import logging
from typing import Iterator, Optional, Tuple

import numpy as np

from ..algebra.symmfunc import in_cone_batch, sigma_batch
from ..config import SAMPLER_MAX_ATTEMPTS, TIE_RTOL
from ..errors import ArgumentError, SamplerError
from ..models.concavity import SamplerProfile
from ..models.spectrum import EigenvalueVector

logger = logging.getLogger(__name__)

Batch = Tuple[np.ndarray, np.ndarray]


def _log_uniform(rng: np.random.Generator, lo: float, hi: float, size) -> np.ndarray:
    return np.exp(rng.uniform(np.log(lo), np.log(hi), size=size))


def _boundary_offset(mu: np.ndarray) -> np.ndarray:
    return 1.0 / np.sum(1.0 / mu, axis=1)


def _assemble(mu: np.ndarray, x: np.ndarray) -> np.ndarray:
    return -np.sort(-np.concatenate([mu, x[:, None]], axis=1), axis=1)


def _normalize(lams: np.ndarray, k: int) -> np.ndarray:
    f = sigma_batch(lams, k)
    with np.errstate(invalid="ignore", divide="ignore"):
        return lams * (f ** (-1.0 / k))[:, None]


def _interior(rng: np.random.Generator, n: int, count: int) -> Batch:
    mu = _log_uniform(rng, np.exp(-3.0), np.exp(3.0), (count, n - 1))
    negative = rng.random(count) < 0.5
    x = np.where(negative,
                 -rng.uniform(0.0, 0.5, count) * _boundary_offset(mu),
                 _log_uniform(rng, np.exp(-3.0), np.exp(3.0), count))
    return _assemble(mu, x), np.ones(count, dtype=int)


def _near_boundary(rng: np.random.Generator, n: int, count: int) -> Batch:
    mu = np.ones((count, n - 1))
    mu[:, 1:] = 1.0 - rng.uniform(1e-3, 1e-1, (count, n - 2))
    tau = 10.0 ** (-rng.uniform(2.0, 8.0, count))
    x = -(1.0 - tau) * _boundary_offset(mu)
    return _assemble(mu, x), np.ones(count, dtype=int)


def _large_negative(rng: np.random.Generator, n: int, count: int) -> Batch:
    mu = _log_uniform(rng, np.exp(-1.0), np.exp(1.0), (count, n - 1))
    tau = 10.0 ** (-rng.uniform(1.0, 8.0, count))
    x = -(1.0 - tau) * _boundary_offset(mu)
    return _assemble(mu, x), np.ones(count, dtype=int)


def _clustered_top(rng: np.random.Generator, n: int, count: int) -> Batch:
    ms = rng.integers(2, n + 1, size=count)
    idx = np.arange(n - 1)[None, :]
    rest = -np.sort(-rng.uniform(0.05, 0.95, (count, n - 1)), axis=1)
    mu = np.where(idx < ms[:, None], 1.0, rest)
    x = np.where(rng.random(count) < 0.5,
                 rng.uniform(0.05, 0.95, count),
                 -rng.uniform(0.0, 0.999, count) * _boundary_offset(mu))
    x = np.where(ms == n, 1.0, x)
    return _assemble(mu, x), ms


_PROFILES = {
    SamplerProfile.INTERIOR: _interior,
    SamplerProfile.NEAR_BOUNDARY: _near_boundary,
    SamplerProfile.LARGE_NEGATIVE: _large_negative,
    SamplerProfile.CLUSTERED_TOP: _clustered_top,
}


def _ray_to_boundary(rng: np.random.Generator, n: int, k: int, count: int, bisections: int = 60) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Random rays μ + t z from positive μ; returns (μ, z, t*) with t* the cone exit."""
    mu = _log_uniform(rng, np.exp(-2.0), np.exp(2.0), (count, n))
    z = rng.standard_normal((count, n))
    z /= np.linalg.norm(z, axis=1, keepdims=True)
    hi = np.full(count, 1.0)
    # Γ_k is a convex cone containing the positive orthant; grow until outside
    for _ in range(60):
        inside = in_cone_batch(mu + hi[:, None] * z, k)
        if not np.any(inside):
            break
        hi = np.where(inside, 2.0 * hi, hi)
    unbounded = in_cone_batch(mu + hi[:, None] * z, k)
    lo = np.zeros(count)
    for _ in range(bisections):
        mid = 0.5 * (lo + hi)
        inside = in_cone_batch(mu + mid[:, None] * z, k)
        lo = np.where(inside, mid, lo)
        hi = np.where(inside, hi, mid)
    return mu, z, np.where(unbounded, np.inf, lo)


def sample_gamma_k_batch(rng: np.random.Generator, n: int, k: int, count: int,
                         near_boundary: bool = False) -> np.ndarray:
    """Γ_k spectra of any order k; unsorted, not normalized."""
    mu, z, t_star = _ray_to_boundary(rng, n, k, count)
    if near_boundary:
        frac = 1.0 - 10.0 ** (-rng.uniform(2.0, 8.0, count))
    else:
        frac = rng.uniform(0.0, 1.0, count)
    t = np.where(np.isfinite(t_star), frac * t_star, rng.uniform(0.0, 10.0, count))
    lams = mu + t[:, None] * z
    return lams[in_cone_batch(lams, k)]


def sample_batch(rng: np.random.Generator, n: int, k: int, profile: SamplerProfile, count: int,
                 A: Optional[float] = None, normalize: bool = True) -> Batch:
    """Draw `count` descending spectra of Γ_k with their multiplicities.

    Normalized samples satisfy σ_k(λ) = 1. The large_negative profile keeps
    only λ_n <= −A and raises SamplerError once the attempt budget runs out.
    """
    profile = SamplerProfile(profile)
    if n < 3:
        raise ArgumentError(f"sampler needs n >= 3, got {n}")
    if k != n - 1:
        if profile not in (SamplerProfile.INTERIOR, SamplerProfile.NEAR_BOUNDARY):
            raise ArgumentError(f"profile {profile.value} is only defined for k = n - 1")
        chunks, total = [], 0
        while total < count:
            lams = sample_gamma_k_batch(rng, n, k, count - total,
                                        near_boundary=profile is SamplerProfile.NEAR_BOUNDARY)
            lams = -np.sort(-lams, axis=1)
            if normalize:
                lams = _normalize(lams, k)
            chunks.append(lams)
            total += lams.shape[0]
        lams = np.concatenate(chunks)[:count]
        return lams, np.ones(count, dtype=int)
    if profile is SamplerProfile.LARGE_NEGATIVE and A is None:
        raise ArgumentError("the large_negative profile needs the threshold A")

    draw = _PROFILES[profile]
    kept_l, kept_m = [], []
    total, attempts = 0, 0
    while total < count:
        want = count - total
        lams, ms = draw(rng, n, want)
        attempts += want
        normalized = _normalize(lams, k)
        ok = in_cone_batch(lams, k)
        # top multiplicity must be exact with a resolvable gap below it
        scale = np.maximum(1.0, np.abs(lams[:, 0]))
        below = lams[:, 0] - lams[np.arange(lams.shape[0]), np.minimum(ms, n - 1)]
        ok &= (ms == n) | (below > TIE_RTOL * scale)
        if profile is SamplerProfile.LARGE_NEGATIVE:
            ok &= normalized[:, -1] <= -A
        kept_l.append((normalized if normalize else lams)[ok])
        kept_m.append(ms[ok])
        total += int(ok.sum())
        if total < count and attempts >= SAMPLER_MAX_ATTEMPTS:
            raise SamplerError(
                f"profile {profile.value} produced {total}/{count} samples in {attempts} attempts",
                {"n": n, "profile": profile.value, "A": A},
            )
    return np.concatenate(kept_l)[:count], np.concatenate(kept_m)[:count]


def sample_xi(rng: np.random.Generator, ms: np.ndarray, n: int, axis_every: int = 5) -> np.ndarray:
    """Unit directions vanishing on 0-based coordinates 1..m−1.

    Every `axis_every`-th row is an admissible coordinate axis instead of a
    uniform point on the sphere.
    """
    ms = np.asarray(ms, dtype=int)
    count = ms.size
    idx = np.arange(n)[None, :]
    admissible = (idx == 0) | (idx >= ms[:, None])
    xi = np.where(admissible, rng.standard_normal((count, n)), 0.0)
    xi /= np.linalg.norm(xi, axis=1, keepdims=True)

    rows = np.arange(count)
    axis_rows = rows[(rows % axis_every) == axis_every - 1]
    for r in axis_rows:
        choices = np.flatnonzero(admissible[r])
        xi[r] = 0.0
        xi[r, choices[(r // axis_every) % choices.size]] = 1.0
    return xi


def sample_cone(n: int, k: int, profile: str, seed: int, count: int,
                A: Optional[float] = None, normalize: bool = True) -> Iterator[Tuple[EigenvalueVector, int]]:
    """Stream of (λ, m) pairs, deterministic in `seed`."""
    if count < 0:
        raise ArgumentError(f"count must be nonnegative, got {count}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    if count == 0:
        return
    lams, ms = sample_batch(rng, n, k, profile, count, A=A, normalize=normalize)
    for lam, m in zip(lams, ms):
        yield EigenvalueVector(lam, sorted=True), int(m)
