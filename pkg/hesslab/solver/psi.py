#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Right-hand-side catalog ψ(x, u, ∇u) with its partial derivatives.

Every entry is c·(positive factor) with c > 0, so ψ > 0 everywhere.
"""

from typing import Tuple

import numpy as np

from ..config import PSI_EXPONENT_MAX
from ..errors import ConfigError
from ..models.solver import PsiSpec

PSI_KINDS = ("constant", "poly_x", "exp_u", "grad_power")

PsiValues = Tuple[np.ndarray, np.ndarray, np.ndarray]


def validate_psi(spec: PsiSpec) -> PsiSpec:
    if spec.kind not in PSI_KINDS:
        raise ConfigError(f"unknown psi kind {spec.kind!r}; expected one of {', '.join(PSI_KINDS)}")
    if not spec.c > 0:
        raise ConfigError(f"psi must be positive: c={spec.c}")
    if abs(spec.s) > PSI_EXPONENT_MAX:
        raise ConfigError(f"psi exponent s={spec.s} outside [-{PSI_EXPONENT_MAX}, {PSI_EXPONENT_MAX}]")
    return spec


def evaluate_psi(spec: PsiSpec, x: np.ndarray, u: np.ndarray, p: np.ndarray) -> PsiValues:
    """Return (ψ, ψ_u, ψ_p) at points x (M, n) with values u (M,) and gradients p (M, n)."""
    m = x.shape[0]
    psi_u = np.zeros(m)
    psi_p = np.zeros_like(p)
    if spec.kind == "constant":
        psi = np.full(m, spec.c)
    elif spec.kind == "poly_x":
        psi = spec.c * (1.0 + np.sum(x ** 2, axis=1)) ** spec.s
    elif spec.kind == "exp_u":
        psi = spec.c * np.exp(spec.s * u)
        psi_u = spec.s * psi
    elif spec.kind == "grad_power":
        base = 1.0 + np.sum(p ** 2, axis=1)
        psi = spec.c * base ** spec.s
        psi_p = (2.0 * spec.s * spec.c * base ** (spec.s - 1.0))[:, None] * p
    else:
        raise ConfigError(f"unknown psi kind {spec.kind!r}")
    return psi, psi_u, psi_p
