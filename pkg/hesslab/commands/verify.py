#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
verify-props: the symmetric-function and spectral property suite.
"""

import logging
from pathlib import Path
from typing import Optional, Sequence

from ..config import EXIT_INVARIANT, EXIT_OK, PROPS_DIMENSIONS, SPECTRAL_SAMPLES
from ..jsonio import success
from ..verification.props import run_property_suite, write_worst_rows
from .common import RunContext, print_table


def cmd_verify_props(
    out_dir: Path,
    seed: int,
    samples: int,
    dimensions: Sequence[int] = PROPS_DIMENSIONS,
    spectral_samples: int = SPECTRAL_SAMPLES,
    fault: Optional[str] = None,
    as_json: bool = False,
) -> int:
    """Run every property for each (n, k) and report the failures.

    Args:
        out_dir: Directory receiving props_<name>.csv and the manifest.
        seed: Root seed; every (n, k) draws from its own child stream.
        samples: Samples per property and (n, k).
        dimensions: Values of n to cover.
        spectral_samples: Cap on the matrix samples of the spectral checks.
        fault: Name of a property whose σ is negated (harness self-test).
        as_json: Emit one JSON document instead of a table.

    Returns:
        0 when every property holds, 1 otherwise.
    """
    logger = logging.getLogger(__name__)
    run_config = {"samples": samples, "dimensions": list(dimensions),
                  "spectral_samples": spectral_samples, "fault": fault}
    run = RunContext(out_dir, "verify-props", run_config, seed=seed)

    results = run_property_suite(seed, samples, dimensions, fault=fault, spectral_samples=spectral_samples)
    for path in write_worst_rows(results, str(run.out_dir)):
        run.record(path)

    failed = [r for r in results if not r.passed]
    code = EXIT_OK if not failed else EXIT_INVARIANT
    for r in failed:
        margin, sample = r.worst[0] if r.worst else (r.min_margin, ())
        logger.error("%s failed at n=%d k=%d: margin %.3e at lambda=%s", r.name, r.n, r.k, margin, list(sample))
    manifest_path = run.finish(code)

    if as_json:
        return success("verify-props", {
            "checks": len(results),
            "failed": [dict(r.to_dict(), worst_sample=list(r.worst[0][1]) if r.worst else None) for r in failed],
            "passed": not failed,
            "statistics": [r.to_dict() for r in results if r.statistic is not None],
            "outputs": run.manifest.outputs,
            "manifest": str(manifest_path),
        }, code=code)

    names = sorted({r.name for r in results})
    rows = []
    for name in names:
        group = [r for r in results if r.name == name]
        rows.append([name, len(group), min(r.min_margin for r in group), sum(not r.passed for r in group)])
    print_table([("property", 26), ("(n,k)", 6), ("min margin", 12), ("failed", 7)], rows)
    print(f"\n{len(results)} checks, {len(failed)} failed. Manifest: {manifest_path}")
    return code
