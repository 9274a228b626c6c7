# hesslab/jsonio.py
from __future__ import annotations
import json, sys
from typing import Any, Dict, Optional

import numpy as np


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays (and nested containers of them) to plain JSON types."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, float) and not np.isfinite(value):
        return None
    return value


def dumps(payload: Any, indent: Optional[int] = None) -> str:
    return json.dumps(to_jsonable(payload), ensure_ascii=False, indent=indent, sort_keys=indent is not None)


def success(command: str, data: Dict[str, Any] | list | None = None,
            meta: Optional[Dict[str, Any]] = None, code: int = 0) -> int:
    payload = {"result": "success", "command": command, "data": data if data is not None else {}}
    if meta:
        payload["meta"] = meta
    # stdout carries the document, logs go to stderr
    print(dumps(payload), file=sys.stdout)
    sys.stdout.flush()
    return code


def error(command: str, message: str, debug: Optional[Dict[str, Any]] = None, code: int = 1) -> int:
    payload = {"result": "error", "command": command, "error": message}
    if debug:
        payload["debug"] = debug
    print(dumps(payload), file=sys.stdout)
    sys.stdout.flush()
    return code
