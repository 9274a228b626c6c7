"""Run manifests for reproducibility."""

from .manager import ManifestManager, config_digest

__all__ = ['ManifestManager', 'config_digest']
