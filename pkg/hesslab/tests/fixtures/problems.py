#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Problem configs, spectra and hypothesis strategies shared by the test modules.
"""

import json
from pathlib import Path
from typing import Any, Dict

import numpy as np
from hypothesis import strategies as st

from hesslab.algebra.symmfunc import in_cone

CONFIG_DIR = Path(__file__).resolve().parents[2] / "configs"


def bundled_config(name: str) -> Path:
    """Path of a config shipped in hesslab/configs."""
    return CONFIG_DIR / name


def ball_config(n: int = 3, points: int = 9, c: float = 1.0, boundary: str = "zero",
                **solver: Any) -> Dict[str, Any]:
    """Small ball problem σ_{n-1}(∇²u) = c, u = g on the sphere."""
    data: Dict[str, Any] = {
        "n": n,
        "domain": {"type": "ball", "radius": 1.0},
        "grid_points": points,
        "psi": {"kind": "constant", "params": {"c": c}},
        "boundary": {"kind": boundary, "params": {}},
    }
    if solver:
        data["solver"] = solver
    return data


def quadratic_box_config(points: int = 5) -> Dict[str, Any]:
    """Box problem whose exact solution |x|²/2 − 3 is reproduced by the stencil."""
    return {
        "n": 3,
        "domain": {"type": "box", "bounds": [[-1.0, 1.0]] * 3},
        "grid_points": points,
        "psi": {"kind": "constant", "params": {"c": 3.0}},
        "boundary": {"kind": "quadratic", "params": {"a": 1.0, "c0": -3.0}},
        "solver": {"tol": 1e-10, "max_iter": 10},
    }


def write_config(tmp_path: Path, data: Dict[str, Any], name: str = "problem.json") -> Path:
    path = tmp_path / name
    path.write_text(json.dumps(data), encoding="utf-8")
    return path


def sorted_desc(values) -> np.ndarray:
    return np.sort(np.asarray(values, dtype=float))[::-1]


# Hypothesis strategies

entries = st.floats(min_value=-5.0, max_value=5.0, allow_nan=False, allow_infinity=False)


@st.composite
def spectra(draw, min_n: int = 3, max_n: int = 8):
    """Arbitrary real spectra, 3 <= n <= 8."""
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    return np.array(draw(st.lists(entries, min_size=n, max_size=n)))


@st.composite
def spectra_with_order(draw, min_n: int = 3, max_n: int = 8):
    lam = draw(spectra(min_n, max_n))
    k = draw(st.integers(min_value=1, max_value=lam.size))
    return lam, k


@st.composite
def cone_members(draw, min_n: int = 3, max_n: int = 6):
    """(λ, k) with λ in Γ_k: a positive spectrum with one entry pushed down."""
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    k = draw(st.integers(min_value=1, max_value=n))
    lam = np.array(draw(st.lists(st.floats(min_value=0.1, max_value=5.0), min_size=n, max_size=n)))
    shift = draw(st.floats(min_value=0.0, max_value=1.0))
    lam[-1] -= shift * lam[-1] * 1.5
    if not in_cone(lam, k).member:
        lam[-1] = abs(lam[-1]) + 0.1
    return lam, k
