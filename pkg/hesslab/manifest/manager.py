#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Run manifest manager: identifiers, config digests and manifest files.
"""

import hashlib
import json
import logging
from datetime import datetime
from pathlib import Path
from typing import Any, Dict, List, Optional

from .. import __version__
from ..errors import ConfigError
from ..jsonio import dumps, to_jsonable
from ..models.manifest import RunManifest
from ..utils.path import ensure_dir
from ..utils.time import utc_now_str

logger = logging.getLogger(__name__)

MANIFEST_SUFFIX = ".manifest.json"


def config_digest(config: Dict[str, Any]) -> str:
    """sha256 of the canonical JSON form (sorted keys, no whitespace)."""
    canonical = json.dumps(to_jsonable(config), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode("utf-8")).hexdigest()


class ManifestManager:
    """Writes and reads the manifest that accompanies every run's outputs."""

    def __init__(self, out_dir: Path):
        self.out_dir = Path(out_dir)
        ensure_dir(self.out_dir)

    def generate_run_id(self, digest: str) -> str:
        """Generate unique run ID."""
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        return f"run_{timestamp}_{digest[:8]}"

    def start(self, subcommand: str, config: Dict[str, Any], seed: Optional[int] = None,
              threads: int = 1) -> RunManifest:
        digest = config_digest(config)
        manifest = RunManifest(
            run_id=self.generate_run_id(digest),
            subcommand=subcommand,
            config_digest=digest,
            seed=seed,
            version=__version__,
            started=utc_now_str(),
            threads=threads,
            config=to_jsonable(config),
        )
        logger.debug("Run %s started (digest %s)", manifest.run_id, digest)
        return manifest

    def path_for(self, run_id: str) -> Path:
        return self.out_dir / f"{run_id}{MANIFEST_SUFFIX}"

    def save(self, manifest: RunManifest, exit_code: Optional[int] = None) -> Path:
        """Stamp the finish time and write the manifest next to the outputs."""
        if exit_code is not None:
            manifest.exit_code = exit_code
        manifest.finished = manifest.finished or utc_now_str()
        path = self.path_for(manifest.run_id)
        path.write_text(dumps(manifest.to_dict(), indent=2) + "\n", encoding="utf-8")
        logger.info("Manifest saved: %s", path)
        return path

    def load(self, source: str | Path) -> RunManifest:
        """Load a manifest by path or by run ID."""
        path = Path(source)
        if not path.exists():
            path = self.path_for(str(source))
        if not path.exists():
            raise ConfigError(f"Manifest not found: {source}")
        try:
            data = json.loads(path.read_text(encoding="utf-8"))
            return RunManifest.from_dict(data)
        except (json.JSONDecodeError, TypeError) as e:
            raise ConfigError(f"Unreadable manifest {path}: {e}")

    def list_manifests(self) -> List[RunManifest]:
        """All readable manifests in the output directory, newest first."""
        manifests = []
        for path in sorted(self.out_dir.glob(f"*{MANIFEST_SUFFIX}")):
            try:
                manifests.append(self.load(path))
            except ConfigError as e:
                logger.warning("Skipping %s: %s", path, e)
        manifests.sort(key=lambda m: m.started, reverse=True)
        return manifests

    def verify_digest(self, manifest: RunManifest) -> bool:
        """True when the embedded config still hashes to the recorded digest."""
        if manifest.config is None:
            return False
        return config_digest(manifest.config) == manifest.config_digest
