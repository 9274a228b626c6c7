#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Data structure for run manifests.
"""

from dataclasses import dataclass, asdict, field
from typing import Optional, List, Dict, Any


@dataclass
class RunManifest:
    """Reproducibility record written next to every run's outputs."""
    run_id: str
    subcommand: str
    config_digest: str
    seed: Optional[int]
    version: str
    started: str
    finished: Optional[str] = None
    threads: int = 1
    exit_code: Optional[int] = None
    outputs: List[str] = field(default_factory=list)

    # Full configuration, so the run can be replayed from the manifest
    config: Optional[Dict[str, Any]] = None

    def to_dict(self) -> Dict[str, Any]:
        """Convert manifest to dictionary for serialization."""
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'RunManifest':
        """Create manifest from dictionary."""
        return cls(**data)
