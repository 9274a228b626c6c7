#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Damped Newton iteration for σ_{n-1}(∇²u) = ψ with a cone barrier.

Each step solves J δ = −r with BiCGSTAB and a diagonal preconditioner, then
halves the step until every interior point stays in Γ_{n-1} and the max-norm
residual strictly decreases.
"""

import logging
from typing import Optional

import numpy as np
import scipy.sparse.linalg as spla

from ..errors import AdmissibilityBarrierError, LinearSolveError
from ..models.solver import ProblemSpec, ResidualField, ScalarField, SolverConfig, SolverState
from .boundary import dirichlet_field
from .operator import assemble_jacobian, gradients, residual
from .psi import evaluate_psi

logger = logging.getLogger(__name__)

MAX_SCALE_DOUBLINGS = 20
SLOPE_REFINEMENTS = 5


def _with_interior(base: ScalarField, interior: np.ndarray) -> ScalarField:
    out = base.copy()
    out.flat[base.grid.interior_flat] = interior
    return out


def _state(u: ScalarField, res: ResidualField, it: int, damping: float, converged: bool, history) -> SolverState:
    return SolverState(u=u, residual_norm=res.norm, newton_iter=it, admissible_fraction=res.admissible_fraction,
                       damping=damping, converged=converged, history=list(history))


def _bowl(spec: ProblemSpec) -> np.ndarray:
    """Convex quadratic w <= 0 on the closure of Ω with ∇²w = I."""
    grid = spec.grid
    x = grid.points()
    if grid.domain == "ball":
        return 0.5 * (np.sum(x ** 2, axis=1) - grid.radius ** 2)
    center = 0.5 * (np.asarray(grid.lower) + np.asarray(grid.upper))
    half = 0.5 * (np.asarray(grid.upper) - np.asarray(grid.lower))
    return 0.5 * (np.sum((x - center) ** 2, axis=1) - np.sum(half ** 2))


def _quadratic_start(spec: ProblemSpec, g: np.ndarray) -> ScalarField:
    grid = spec.grid
    n, k = grid.n, spec.k
    bowl = _bowl(spec)
    base = ScalarField(grid, g)
    interior = grid.interior_flat

    psi_max = spec.psi.c
    a = (psi_max / n) ** (1.0 / (n - 1))
    for _ in range(SLOPE_REFINEMENTS):
        u0 = _with_interior(base, g[interior] + a * bowl[interior])
        psi, _, _ = evaluate_psi(spec.psi, grid.points(interior), u0.flat[interior], gradients(u0))
        a = max(a, (float(np.max(psi)) / n) ** (1.0 / (n - 1)))
    u0 = _with_interior(base, g[interior] + a * bowl[interior])
    for _ in range(MAX_SCALE_DOUBLINGS):
        if residual(u0, spec).admissible_fraction == 1.0:
            return u0
        a *= 2.0
        u0 = _with_interior(base, g[interior] + a * bowl[interior])
    return u0


def initial_guess(spec: ProblemSpec, config: SolverConfig) -> ScalarField:
    """Starting iterate carrying the Dirichlet data on the boundary.

    'boundary' extends g into the interior; on balls with zero data this is
    the layer quadratic, admissible by construction. 'quadratic' adds a·w with
    w a convex bowl and a large enough that σ_{n-1}(aI) covers max ψ; it only
    stays admissible next to the boundary where the layer agrees with the
    bowl. 'auto' uses the extension when it is admissible and the bowl
    otherwise.
    """
    grid = spec.grid
    g = dirichlet_field(spec.boundary, grid, spec.psi)
    if config.initial_guess in ("boundary", "auto"):
        extended = ScalarField(grid, g)
        if config.initial_guess == "boundary" or residual(extended, spec).admissible_fraction == 1.0:
            return extended
    return _quadratic_start(spec, g)


def _jacobi_preconditioner(matrix) -> spla.LinearOperator:
    diag = matrix.diagonal()
    inv = np.where(diag != 0.0, 1.0 / np.where(diag != 0.0, diag, 1.0), 1.0)
    return spla.LinearOperator(matrix.shape, matvec=lambda v: inv * v, dtype=float)


def newton_solve(spec: ProblemSpec, config: Optional[SolverConfig] = None,
                 start: Optional[ScalarField] = None) -> SolverState:
    """Solve the Dirichlet problem; returns the final state or raises with it attached."""
    config = config or SolverConfig()
    grid = spec.grid
    u = start.copy() if start is not None else initial_guess(spec, config)
    res = residual(u, spec)
    history = []
    if res.admissible_fraction < 1.0:
        raise AdmissibilityBarrierError(
            f"initial guess is admissible at only {res.admissible_fraction:.3%} of interior points",
            _state(u, res, 0, 0.0, False, history),
        )
    logger.info("Newton start: %d unknowns, residual %.3e", grid.interior_count, res.norm)
    step = 1.0

    for it in range(1, config.max_iter + 1):
        if res.norm <= config.tol:
            return _state(u, res, it - 1, step, True, history)
        jac = assemble_jacobian(u, spec)
        delta, info = spla.bicgstab(jac, -res.values, rtol=config.linear_rtol, maxiter=config.linear_max_iter,
                                    M=_jacobi_preconditioner(jac))
        if info != 0 or not np.all(np.isfinite(delta)):
            raise LinearSolveError(
                f"BiCGSTAB did not converge at Newton step {it} (info={info})",
                _state(u, res, it - 1, step, False, history), {"info": int(info)},
            )

        step = 1.0
        interior = u.interior_values()
        for halving in range(config.max_halvings + 1):
            trial = _with_interior(u, interior + step * delta)
            trial_res = residual(trial, spec)
            if trial_res.admissible_fraction == 1.0 and trial_res.norm < res.norm:
                break
            logger.debug("step %d: halving %d rejected (admissible %.4f, residual %.3e)",
                         it, halving, trial_res.admissible_fraction, trial_res.norm)
            step *= config.damping
        else:
            raise AdmissibilityBarrierError(
                f"line search exhausted {config.max_halvings} halvings at Newton step {it}",
                _state(u, res, it - 1, step, False, history),
            )

        u, res = trial, trial_res
        history.append({"iteration": it, "residual_norm": res.norm, "step": step,
                        "admissible_fraction": res.admissible_fraction})
        logger.info("Newton %2d: residual %.3e, step %.4g, admissible %.3f",
                    it, res.norm, step, res.admissible_fraction)

    converged = res.norm <= config.tol
    if not converged:
        logger.warning("Newton stopped after %d iterations with residual %.3e", config.max_iter, res.norm)
    return _state(u, res, config.max_iter, step, converged, history)
