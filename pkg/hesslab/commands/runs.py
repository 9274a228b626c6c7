#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
list-runs: manifests found in the output directory.
"""

from pathlib import Path

from ..config import EXIT_OK
from ..jsonio import success
from ..manifest.manager import ManifestManager


def cmd_list_runs(out_dir: Path, as_json: bool = False) -> int:
    """List run manifests, newest first, flagging digests that no longer match."""
    manager = ManifestManager(out_dir)
    manifests = manager.list_manifests()

    if as_json:
        return success("list-runs", {
            "runs": [dict(m.to_dict(), digest_ok=manager.verify_digest(m)) for m in manifests],
            "total_count": len(manifests),
            "out_dir": str(out_dir),
        })

    if not manifests:
        print("No runs found.")
        return EXIT_OK

    print("Recorded runs:")
    print(f"{'Run ID':<34} {'Subcommand':<20} {'Started':<22} {'Exit':<5} {'Digest':<7}")
    print("-" * 92)
    for m in manifests:
        exit_code = "-" if m.exit_code is None else str(m.exit_code)
        digest = "ok" if manager.verify_digest(m) else "stale"
        print(f"{m.run_id:<34} {m.subcommand:<20} {m.started:<22} {exit_code:<5} {digest:<7}")
    return EXIT_OK
