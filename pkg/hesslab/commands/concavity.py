#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
verify-concavity: Monte-Carlo campaign for the concavity inequality,
optionally followed by the constant search.
"""

import dataclasses
import logging
from pathlib import Path
from typing import Any, Dict, Optional, Sequence

from ..concavity.campaign import campaign_header, run_campaign, search_constants
from ..concavity.inequality import default_constants
from ..config import CAMPAIGN_DIMENSIONS, DEFAULT_FMAX, EXIT_INVARIANT, EXIT_OK, SAMPLER_PROFILES
from ..errors import ConfigError
from ..jsonio import dumps, success
from ..models.concavity import BranchConstants, SamplerProfile
from ..writer import CsvWriter, write_csv
from .common import RunContext, print_table

logger = logging.getLogger(__name__)

OVERRIDE_FIELDS = ("delta0", "K", "A", "C_lambda1")


def resolve_constants(n: int, fmax: float = DEFAULT_FMAX,
                      overrides: Optional[Dict[str, Optional[float]]] = None) -> BranchConstants:
    """Default constants for n with any CLI overrides applied (revalidated)."""
    base = default_constants(n, fmax)
    changes = {k: float(v) for k, v in (overrides or {}).items() if v is not None}
    unknown = set(changes) - set(OVERRIDE_FIELDS)
    if unknown:
        raise ConfigError(f"unknown constant overrides: {sorted(unknown)}")
    return dataclasses.replace(base, **changes) if changes else base


def _validate_profiles(profiles: Sequence[str]) -> list:
    try:
        return [SamplerProfile(p).value for p in profiles]
    except ValueError as e:
        raise ConfigError(f"{e}; expected one of {', '.join(SAMPLER_PROFILES)}")


def _search_rows(search) -> list:
    return [[p.delta0, p.K, p.C_lambda1, p.min_deficit, p.counted, p.verified, p.default_candidate]
            for p in search.grid]


def cmd_verify_concavity(
    out_dir: Path,
    seed: int,
    samples: int,
    dimensions: Sequence[int] = CAMPAIGN_DIMENSIONS,
    profiles: Sequence[str] = SAMPLER_PROFILES,
    overrides: Optional[Dict[str, Optional[float]]] = None,
    fmax: float = DEFAULT_FMAX,
    search: bool = False,
    as_json: bool = False,
) -> int:
    """Run the campaign for each n; exit 0 iff every minimum deficit clears the tolerance.

    Writes concavity_n<n>.csv per dimension, concavity_summary.json and, with
    `search`, constants_search_n<n>.csv.
    """
    if samples <= 0:
        raise ConfigError(f"samples must be positive, got {samples}")
    bad = [n for n in dimensions if n not in CAMPAIGN_DIMENSIONS]
    if bad:
        raise ConfigError(f"campaign supports n in {CAMPAIGN_DIMENSIONS}, got {bad}")
    profiles = _validate_profiles(profiles)
    constants = {n: resolve_constants(n, fmax, overrides) for n in dimensions}

    run_config = {
        "samples": samples, "dimensions": list(dimensions), "profiles": profiles, "fmax": fmax,
        "search": search, "constants": {str(n): c.to_dict() for n, c in constants.items()},
    }
    run = RunContext(out_dir, "verify-concavity", run_config, seed=seed)

    report: Dict[str, Any] = {}
    all_passed = True
    for n in dimensions:
        path = run.output(f"concavity_n{n}.csv")
        with CsvWriter(str(path), campaign_header(n)) as writer:
            result = run_campaign(n, samples, constants[n], seed, profiles=profiles, writer=writer)
        entry: Dict[str, Any] = {"constants": constants[n].to_dict(), "summary": result.summary}
        all_passed = all_passed and result.passed

        if search:
            found = search_constants(result.arrays, A=constants[n].A, fmax=fmax)
            grid_path = run.output(f"constants_search_n{n}.csv")
            write_csv(str(grid_path), ["delta0", "K", "C_lambda1", "min_deficit", "counted", "verified",
                                       "default_candidate"], _search_rows(found))
            entry["search"] = {"constants": found.constants.to_dict(), "min_deficit": found.min_deficit,
                               "verified": found.verified}
        report[str(n)] = entry
        if not result.passed:
            logger.error("n=%d: minimum deficit %s below tolerance", n, result.summary["min_deficit"])

    summary_path = run.output("concavity_summary.json")
    summary_path.write_text(dumps(report, indent=2) + "\n", encoding="utf-8")
    code = EXIT_OK if all_passed else EXIT_INVARIANT
    manifest_path = run.finish(code)

    if as_json:
        return success("verify-concavity", {"dimensions": report, "passed": all_passed,
                                            "outputs": run.manifest.outputs, "manifest": str(manifest_path)},
                       code=code)

    rows = []
    for n in dimensions:
        s = report[str(n)]["summary"]
        for branch, b in s["branches"].items():
            rows.append([n, branch, b["samples"], b["counted"], b["min_deficit"], b["min_worst_direction"]])
    print_table([("n", 3), ("branch", 18), ("samples", 9), ("counted", 9), ("min deficit", 12),
                 ("worst dir", 12)], rows)
    for n in dimensions:
        entry = report[str(n)]
        line = f"n={n}: min deficit {entry['summary']['min_deficit']}, passed={entry['summary']['passed']}"
        if "search" in entry:
            c = entry["search"]["constants"]
            line += (f"; search -> delta0={c['delta0']:.4g} K={c['K']:.4g} C_lambda1={c['C_lambda1']:.4g}"
                     f" (verified={entry['search']['verified']})")
        print(line)
    print(f"Manifest: {manifest_path}")
    return code
