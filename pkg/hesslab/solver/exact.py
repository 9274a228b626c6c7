#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Closed-form radial solutions of σ_{n-1}(∇²u) = c(1 + |x|²)^s, s ∈ {0, 1}.

For u = u(r) with w = u'/r the Hessian has eigenvalues w + r w' (radial) and w
(n − 1 times), so σ_{n-1}(∇²u) = r^{1-n} (r^n w^{n-1})'. Integrating from 0
gives w^{n-1} = c/n for s = 0 and w^{n-1} = c/n + c r²/(n + 2) for s = 1.
"""

from typing import Callable, Optional

import numpy as np

from ..errors import ConfigError

RadialFunction = Callable[[np.ndarray], np.ndarray]


def _profile(n: int, c: float, s: int) -> RadialFunction:
    if s == 0:
        w = (c / n) ** (1.0 / (n - 1))
        return lambda r2: 0.5 * w * r2
    a, b = c / n, c / (n + 2)
    factor = (n - 1) / (2.0 * b * n)
    return lambda r2: factor * (a + b * r2) ** (n / (n - 1))


def radial_exact_solution(n: int, c: float = 1.0, s: int = 0, R: float = 1.0) -> RadialFunction:
    """u(x) vanishing on |x| = R; call with points of shape (M, n)."""
    if n < 3:
        raise ConfigError(f"radial solutions need n >= 3, got {n}")
    if s not in (0, 1):
        raise ConfigError(f"closed-form radial solutions exist for s in {{0, 1}}, got {s}")
    if not c > 0 or not R > 0:
        raise ConfigError(f"need c > 0 and R > 0, got c={c}, R={R}")
    profile = _profile(n, float(c), int(s))
    offset = float(profile(np.array(R * R)))

    def solution(x: np.ndarray) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        return profile(np.sum(x ** 2, axis=1)) - offset

    return solution


def radial_slope(n: int, c: float = 1.0) -> float:
    """w = (c/n)^{1/(n-1)}, the Hessian multiple of the s = 0 solution."""
    return (c / n) ** (1.0 / (n - 1))


def exact_reference(spec) -> Optional[RadialFunction]:
    """Closed-form solution of a ProblemSpec when one is known, else None.

    Known cases are balls centred at the origin whose ψ is constant or
    c(1 + |x|²) and whose boundary data is zero or the matching radial_exact.
    """
    grid = spec.grid
    if grid.domain != "ball":
        return None
    psi = spec.psi
    if psi.kind == "constant":
        s = 0
    elif psi.kind == "poly_x" and psi.s == 1.0:
        s = 1
    else:
        return None
    boundary = spec.boundary
    if boundary.kind == "zero":
        return radial_exact_solution(grid.n, psi.c, s, grid.radius)
    if boundary.kind == "radial_exact":
        params = boundary.params
        same = (float(params.get("c", 1.0)) == psi.c and int(params.get("s", 0)) == s
                and float(params.get("R", grid.radius)) == grid.radius)
        return radial_exact_solution(grid.n, psi.c, s, grid.radius) if same else None
    return None
