#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Monte-Carlo verification campaign for the concavity inequality and the
search over (δ₀, K, C_lambda1).

Samples are drawn in fixed-size chunks, each from its own child of
SeedSequence(seed), so the output depends on the seed only and never on the
number of worker threads.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, Iterable, List, Optional, Sequence

import numpy as np
from tqdm import tqdm

from .. import config
from ..config import (
    CHUNK_SIZE, DEFICIT_TOLERANCE, SAMPLER_PROFILES, SEARCH_DELTA0_GRID, SEARCH_K_FACTORS,
    SEARCH_LAMBDA1_GRID, SEARCH_MIN_SAMPLES,
)
from ..errors import ArgumentError, ConfigError
from ..models.concavity import (
    Branch, BranchConstants, CampaignResult, GridPoint, SamplerProfile, SearchResult,
)
from ..models.spectrum import EigenvalueVector
from ..writer import CsvWriter
from .certificate import certificate_matrix, certificate_minors
from .inequality import (
    classify_branch, combine, deficit_terms_batch, default_delta0, worst_direction_batch,
)
from .sampler import sample_batch, sample_xi

logger = logging.getLogger(__name__)

HOMOGENEITY_SAMPLES = 64
HOMOGENEITY_FACTORS = (0.5, 2.0)


def plan_chunks(samples: int, profiles: Sequence[str]) -> List[tuple]:
    """Split `samples` over profiles, then into (profile, size) chunks."""
    if samples <= 0:
        raise ArgumentError(f"sample count must be positive, got {samples}")
    if not profiles:
        raise ArgumentError("at least one sampler profile is required")
    share, extra = divmod(samples, len(profiles))
    chunks = []
    for i, profile in enumerate(profiles):
        count = share + (1 if i < extra else 0)
        while count > 0:
            size = min(CHUNK_SIZE, count)
            chunks.append((SamplerProfile(profile).value, size))
            count -= size
    return chunks


def _certificates(lams: np.ndarray, ms: np.ndarray, branches: np.ndarray, constants: BranchConstants) -> np.ndarray:
    out = np.full(lams.shape[0], np.nan)
    for row in np.flatnonzero(branches == Branch.NONSEMICONVEX.value):
        y, d = certificate_matrix(EigenvalueVector(lams[row], sorted=True), int(ms[row]),
                                  constants.delta0, constants.A)
        out[row] = float(np.all(certificate_minors(y, d) > 0))
    return out


def evaluate_chunk(n: int, profile: str, size: int, seed_seq: np.random.SeedSequence,
                   constants: BranchConstants) -> Dict[str, np.ndarray]:
    rng = np.random.default_rng(seed_seq)
    lams, ms = sample_batch(rng, n, n - 1, profile, size, A=constants.A)
    xis = sample_xi(rng, ms, n)
    terms = deficit_terms_batch(lams, ms, xis)
    branches = classify_branch(lams, ms, constants.A)
    return {
        "lams": lams,
        "ms": ms,
        "xis": xis,
        "profile": np.full(size, profile, dtype=object),
        "branch": branches,
        "cross": terms["cross"],
        "square": terms["square"],
        "gap": terms["gap"],
        "rhs": terms["rhs"],
        "deficit": combine(terms, constants.K, constants.delta0),
        "worst": worst_direction_batch(lams, ms, constants.K, constants.delta0),
        "certificate": _certificates(lams, ms, branches, constants),
    }


def _concat(parts: Iterable[Dict[str, np.ndarray]]) -> Dict[str, np.ndarray]:
    parts = list(parts)
    return {key: np.concatenate([p[key] for p in parts]) for key in parts[0]}


def verdict_mask(arrays: Dict[str, np.ndarray], c_lambda1: float) -> np.ndarray:
    """Samples the verdict is taken over: λ₁ >= C_lambda1, plus the full-multiplicity ray."""
    return (arrays["lams"][:, 0] >= c_lambda1) | (arrays["branch"] == Branch.FULL_MULTIPLICITY.value)


def homogeneity_error(lams: np.ndarray, ms: np.ndarray, xis: np.ndarray, K: float, delta0: float) -> float:
    """Largest relative violation of deficit(tλ) = t^{n-3} deficit(λ)."""
    n = lams.shape[1]
    base = deficit_terms_batch(lams, ms, xis)
    ref = combine(base, K, delta0)
    scale = (np.abs(base["cross"]) + K * np.abs(base["square"]) + np.abs(base["gap"])
             + (1.0 + delta0) * np.abs(base["rhs"]))
    worst = 0.0
    for t in HOMOGENEITY_FACTORS:
        scaled = combine(deficit_terms_batch(t * lams, ms, xis), K, delta0)
        err = np.abs(scaled - t ** (n - 3) * ref) / (t ** (n - 3) * np.maximum(scale, 1e-300))
        worst = max(worst, float(np.max(err)))
    return worst


def summarize(arrays: Dict[str, np.ndarray], constants: BranchConstants) -> Dict[str, Any]:
    mask = verdict_mask(arrays, constants.C_lambda1)
    branches: Dict[str, Any] = {}
    for branch in Branch:
        sel = arrays["branch"] == branch.value
        used = sel & mask
        cert = arrays["certificate"][used]
        branches[branch.value] = {
            "samples": int(sel.sum()),
            "counted": int(used.sum()),
            "excluded": int((sel & ~mask).sum()),
            "min_deficit": float(arrays["deficit"][used].min()) if used.any() else None,
            "min_worst_direction": float(arrays["worst"][used].min()) if used.any() else None,
            "certificate_failures": int(np.sum(cert == 0.0)),
        }
    profiles = {p: int(np.sum(arrays["profile"] == p)) for p in np.unique(arrays["profile"])}
    counted = int(mask.sum())
    min_deficit = float(arrays["deficit"][mask].min()) if counted else None
    head = slice(0, min(HOMOGENEITY_SAMPLES, arrays["lams"].shape[0]))
    homog = homogeneity_error(arrays["lams"][head], arrays["ms"][head], arrays["xis"][head],
                              constants.K, constants.delta0)
    return {
        "samples": int(mask.size),
        "counted": counted,
        "excluded": int(mask.size - counted),
        "min_deficit": min_deficit,
        "min_worst_direction": float(arrays["worst"][mask].min()) if counted else None,
        "homogeneity_error": homog,
        "branches": branches,
        "profiles": profiles,
        "passed": bool(counted and min_deficit >= -DEFICIT_TOLERANCE),
    }


def campaign_header(n: int) -> List[str]:
    return (["n", "m", "profile"] + [f"lambda_{i + 1}" for i in range(n)]
            + [f"xi_{i + 1}" for i in range(n)] + ["K", "delta0", "branch", "deficit", "worst_direction"])


def write_rows(writer: CsvWriter, arrays: Dict[str, np.ndarray], constants: BranchConstants) -> None:
    n = arrays["lams"].shape[1]
    for i in range(arrays["lams"].shape[0]):
        writer.submit(
            [n, int(arrays["ms"][i]), arrays["profile"][i]]
            + [float(v) for v in arrays["lams"][i]] + [float(v) for v in arrays["xis"][i]]
            + [float(constants.K), float(constants.delta0), arrays["branch"][i],
               float(arrays["deficit"][i]), float(arrays["worst"][i])]
        )


def run_campaign(n: int, samples: int, constants: BranchConstants, seed: int,
                 profiles: Sequence[str] = SAMPLER_PROFILES, threads: Optional[int] = None,
                 progress: Optional[bool] = None, writer: Optional[CsvWriter] = None) -> CampaignResult:
    """Sample, evaluate and summarize the inequality for dimension n."""
    if constants.n != n:
        raise ConfigError(f"constants are for n={constants.n}, campaign is for n={n}")
    threads = threads or config.THREADS
    progress = config.SHOW_PROGRESS if progress is None else progress
    chunks = plan_chunks(samples, profiles)
    seeds = np.random.SeedSequence(seed).spawn(len(chunks))
    logger.info("Campaign n=%d: %d samples in %d chunks on %d thread(s)", n, samples, len(chunks), threads)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = pool.map(lambda job: evaluate_chunk(n, job[0][0], job[0][1], job[1], constants),
                           zip(chunks, seeds))
        parts = []
        for part in tqdm(results, total=len(chunks), desc=f"n={n}", unit="chunk", disable=not progress):
            parts.append(part)
            if writer is not None:
                write_rows(writer, part, constants)

    arrays = _concat(parts)
    summary = summarize(arrays, constants)
    logger.info("n=%d: min deficit %s over %d counted samples (%d excluded)",
                n, summary["min_deficit"], summary["counted"], summary["excluded"])
    return CampaignResult(n=n, constants=constants, seed=seed, arrays=arrays, summary=summary)


def _restrictiveness(point: GridPoint):
    return (point.C_lambda1, point.K, -point.delta0)


def search_constants(arrays: Dict[str, np.ndarray], A: float, fmax: float = 1.0,
                     delta0_grid: Sequence[float] = SEARCH_DELTA0_GRID,
                     k_factors: Sequence[float] = SEARCH_K_FACTORS,
                     lambda1_grid: Sequence[float] = SEARCH_LAMBDA1_GRID,
                     min_samples: int = SEARCH_MIN_SAMPLES) -> SearchResult:
    """Pick the least restrictive verified (δ₀, K, C_lambda1) on a finite grid.

    The deficit is affine in K and δ₀, so the four terms are evaluated once
    and recombined per grid point. Points whose verdict set is empty are
    never verified. Ordering: smaller C_lambda1, then smaller K, then larger δ₀.
    """
    if "lams" not in arrays or arrays["lams"].shape[0] == 0:
        raise ConfigError("constant search needs a non-empty sample set")
    total = arrays["lams"].shape[0]
    if total < min_samples:
        raise ConfigError(f"constant search needs at least {min_samples} samples, got {total}")
    n = arrays["lams"].shape[1]
    terms = {key: arrays[key] for key in ("cross", "square", "gap", "rhs")}
    default_d0 = default_delta0(n)
    deltas = sorted(set(delta0_grid) | {default_d0})
    ks = sorted({f * n * n for f in k_factors} | {float(n * n)})

    grid: List[GridPoint] = []
    for c in sorted(lambda1_grid):
        mask = verdict_mask(arrays, c)
        counted = int(mask.sum())
        for K in ks:
            for d0 in deltas:
                if counted:
                    values = combine({k: v[mask] for k, v in terms.items()}, K, d0)
                    low = float(values.min())
                else:
                    low = float("nan")
                grid.append(GridPoint(
                    delta0=float(d0), K=float(K), C_lambda1=float(c), min_deficit=low,
                    counted=counted, verified=bool(counted and low >= -DEFICIT_TOLERANCE),
                    default_candidate=bool(np.isclose(d0, default_d0) and np.isclose(K, n * n)),
                ))

    verified = sorted((p for p in grid if p.verified), key=_restrictiveness)
    if verified:
        best = verified[0]
    else:
        scored = [p for p in grid if p.counted]
        best = max(scored, key=lambda p: p.min_deficit) if scored else grid[0]
    logger.info("Search n=%d: %d/%d grid points verified", n, len(verified), len(grid))
    constants = BranchConstants(n=n, A=A, C_lambda1=best.C_lambda1, delta0=best.delta0, K=best.K, Fmax=fmax)
    return SearchResult(constants=constants, min_deficit=best.min_deficit, verified=best.verified, grid=grid)
