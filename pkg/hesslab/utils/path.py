#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Path helpers: output directory resolution.
"""

import logging
import os
from pathlib import Path
from typing import Optional

from ..config import DEFAULT_OUT_DIR, OUT_ENV_VAR

logger = logging.getLogger(__name__)


def ensure_dir(p: Path) -> None:
    """Ensure directory exists, creating it if necessary."""
    p.mkdir(parents=True, exist_ok=True)


def resolve_out_dir(cli_value: Optional[str]) -> Path:
    """Pick the output directory: $HESSLAB_OUT beats --out beats the default."""
    env_value = os.environ.get(OUT_ENV_VAR)
    if env_value:
        if cli_value and cli_value != env_value:
            logger.info("%s overrides --out (%s -> %s)", OUT_ENV_VAR, cli_value, env_value)
        chosen = Path(env_value)
    else:
        chosen = Path(cli_value or DEFAULT_OUT_DIR)
    ensure_dir(chosen)
    return chosen
