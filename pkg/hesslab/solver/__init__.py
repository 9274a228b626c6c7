from .grid import build_ball_grid, build_box_grid, build_stencil, nearest_index
from .operator import (
    hessian_at, hessians, gradient_at, gradients, residual, linearized_apply, assemble_jacobian,
    admissibility_check,
)
from .newton import newton_solve, initial_guess
from .problem import load_problem_config, build_problem
from .snapshot import write_snapshot, read_snapshot, export_csv
from .exact import radial_exact_solution, exact_reference

__all__ = [
    "build_ball_grid", "build_box_grid", "build_stencil", "nearest_index",
    "hessian_at", "hessians", "gradient_at", "gradients", "residual", "linearized_apply",
    "assemble_jacobian", "admissibility_check",
    "newton_solve", "initial_guess", "load_problem_config", "build_problem",
    "write_snapshot", "read_snapshot", "export_csv", "radial_exact_solution", "exact_reference",
]
