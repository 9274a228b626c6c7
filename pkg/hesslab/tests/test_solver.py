#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tests for the finite-difference Dirichlet solver: grids, the discrete
operator, problem configs, Newton iteration and snapshots.
"""

import json
import sys
from pathlib import Path
from unittest.mock import patch

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from hesslab.errors import (
    AdmissibilityBarrierError, ConfigError, DiscretizationError, LinearSolveError, SnapshotError,
)
from hesslab.models.solver import (
    BOUNDARY, EXTERIOR, INTERIOR, BoundarySpec, ProblemSpec, PsiSpec, ScalarField, SolverConfig,
)
from hesslab.solver.boundary import boundary_values, dirichlet_field, layer_slope, validate_boundary
from hesslab.solver.exact import exact_reference, radial_exact_solution, radial_slope
from hesslab.solver.grid import build_ball_grid, build_box_grid, build_stencil, locate, nearest_index
from hesslab.solver.newton import initial_guess, newton_solve
from hesslab.solver.operator import (
    admissibility_check, assemble_jacobian, gradient_at, gradients, hessian_at, hessians, linearized_apply,
    residual,
)
from hesslab.solver.problem import build_problem, load_problem_config, read_config
from hesslab.solver.psi import evaluate_psi, validate_psi
from hesslab.solver.snapshot import export_csv, read_snapshot, write_snapshot
from hesslab.tests.fixtures.problems import ball_config, bundled_config, quadratic_box_config, write_config


def box_spec(points=9, psi=None, boundary=None, bounds=None):
    grid = build_box_grid(3, points, bounds)
    return ProblemSpec(grid=grid, psi=psi or PsiSpec("constant", 3.0),
                       boundary=boundary or BoundarySpec("zero"), k=2)


def field_of(grid, fn):
    return ScalarField(grid, fn(grid.points()))


@pytest.mark.solver
class TestGrid:
    """Box and ball grids with their masks."""

    def test_box_counts(self):
        grid = build_box_grid(3, 5)
        assert grid.h == pytest.approx(0.5)
        assert grid.interior_count == 27
        assert grid.boundary_flat.size == 125 - 27
        assert not np.any(grid.mask == EXTERIOR)

    def test_ball_interior_rule(self):
        grid = build_ball_grid(3, 9)
        x = grid.points()
        r = np.linalg.norm(x, axis=1)
        flat = grid.mask.reshape(-1)
        np.testing.assert_array_equal(flat == INTERIOR, r < 1.0 - 0.5 * grid.h)
        assert np.any(flat == EXTERIOR)
        assert np.all(r[flat == BOUNDARY] >= 1.0 - 0.5 * grid.h)

    def test_ball_stencil_stays_in_mask(self):
        for n, points in ((3, 9), (4, 9), (3, 12)):
            grid = build_ball_grid(n, points)
            st = build_stencil(grid)
            assert np.all(grid.mask.reshape(-1)[st.all_neighbors()] != EXTERIOR)

    def test_stencil_cached(self):
        grid = build_box_grid(3, 4)
        assert build_stencil(grid) is build_stencil(grid)

    def test_too_few_points(self):
        with pytest.raises(ConfigError):
            build_ball_grid(3, 8)
        with pytest.raises(ConfigError):
            build_box_grid(3, 2)

    def test_box_sides_must_match(self):
        with pytest.raises(ConfigError):
            build_box_grid(3, 5, [[-1, 1], [-1, 1], [0, 1]])
        with pytest.raises(ConfigError):
            build_box_grid(3, 5, [[1, -1]] * 3)

    def test_locate(self):
        grid = build_box_grid(3, 5)
        assert locate(grid, (1, 2, 3)) == 1 * 25 + 2 * 5 + 3
        assert locate(grid, 7) == 7
        with pytest.raises(DiscretizationError):
            locate(grid, (5, 0, 0))
        with pytest.raises(DiscretizationError):
            locate(grid, 125)

    def test_nearest_index(self):
        grid = build_box_grid(3, 5)
        assert nearest_index(grid, [0.0, 0.0, 0.0]) == (2, 2, 2)
        assert nearest_index(grid, [5.0, -5.0, 0.4]) == (4, 0, 3)

    def test_descriptor(self):
        assert build_ball_grid(3, 9, 2.0).descriptor()["radius"] == 2.0
        assert build_box_grid(3, 5).descriptor()["bounds"] == [[-1.0, 1.0]] * 3


@pytest.mark.solver
class TestOperator:
    """Central differences, residual and linearization."""

    def test_exact_on_quadratics(self):
        grid = build_box_grid(3, 7)
        a = np.array([[2.0, 0.3, -0.1], [0.3, 1.0, 0.4], [-0.1, 0.4, 1.5]])
        b = np.array([0.2, -0.5, 1.0])
        u = field_of(grid, lambda x: 0.5 * np.einsum("bi,ij,bj->b", x, a, x) + x @ b)
        np.testing.assert_allclose(hessians(u), np.broadcast_to(a, (grid.interior_count, 3, 3)), atol=1e-10)
        x = grid.points(grid.interior_flat)
        np.testing.assert_allclose(gradients(u), x @ a + b, atol=1e-10)

    def test_pointwise_access(self):
        grid = build_box_grid(3, 5)
        u = field_of(grid, lambda x: np.sum(x ** 2, axis=1))
        np.testing.assert_allclose(hessian_at(u, (2, 2, 2)).entries, 2.0 * np.eye(3), atol=1e-12)
        np.testing.assert_allclose(gradient_at(u, (3, 2, 2)), [1.0, 0.0, 0.0], atol=1e-12)
        with pytest.raises(DiscretizationError):
            hessian_at(u, (0, 2, 2))

    def test_residual_and_admissibility(self):
        spec = box_spec(points=7)
        u = field_of(spec.grid, lambda x: 0.5 * np.sum(x ** 2, axis=1))
        res = residual(u, spec)
        assert res.norm < 1e-10
        assert res.admissible_fraction == 1.0
        fraction, margin = admissibility_check(u)
        assert fraction == 1.0
        assert margin == pytest.approx(3.0)

    def test_inadmissible_points_flagged(self):
        spec = box_spec(points=5)
        u = field_of(spec.grid, lambda x: -np.sum(x ** 2, axis=1))
        assert residual(u, spec).admissible_fraction == 0.0
        assert admissibility_check(u)[0] == 0.0

    def test_jacobian_matches_linearization(self):
        spec = box_spec(points=6, psi=PsiSpec("exp_u", 1.0, 0.5))
        grid = spec.grid
        u = field_of(grid, lambda x: np.sum(x ** 2, axis=1) + 0.1 * x[:, 0] * x[:, 1])
        rng = np.random.default_rng(0)
        du = ScalarField(grid, np.zeros(grid.size))
        du.flat[grid.interior_flat] = rng.standard_normal(grid.interior_count)
        direct = linearized_apply(u, spec, du)
        matrix = assemble_jacobian(u, spec) @ du.interior_values()
        np.testing.assert_allclose(matrix, direct, rtol=1e-10, atol=1e-10)

    def test_linearization_matches_difference_quotient(self):
        spec = box_spec(points=6, psi=PsiSpec("grad_power", 1.0, 0.5))
        grid = spec.grid
        u = field_of(grid, lambda x: np.sum(x ** 2, axis=1))
        rng = np.random.default_rng(1)
        du = ScalarField(grid, np.zeros(grid.size))
        du.flat[grid.interior_flat] = rng.standard_normal(grid.interior_count)
        eps = 1e-6
        plus = ScalarField(grid, u.values + eps * du.values)
        minus = ScalarField(grid, u.values - eps * du.values)
        quotient = (residual(plus, spec).values - residual(minus, spec).values) / (2 * eps)
        np.testing.assert_allclose(linearized_apply(u, spec, du), quotient, rtol=1e-5, atol=1e-5)


@pytest.mark.solver
class TestCatalogs:
    """ψ and boundary catalogs and the radial closed forms."""

    def test_psi_derivatives(self):
        rng = np.random.default_rng(2)
        x = rng.standard_normal((5, 3))
        u = rng.standard_normal(5)
        p = rng.standard_normal((5, 3))
        spec = PsiSpec("grad_power", 2.0, 1.5)
        _, _, psi_p = evaluate_psi(spec, x, u, p)
        eps = 1e-6
        for i in range(3):
            e = np.zeros(3)
            e[i] = eps
            fd = (evaluate_psi(spec, x, u, p + e)[0] - evaluate_psi(spec, x, u, p - e)[0]) / (2 * eps)
            np.testing.assert_allclose(psi_p[:, i], fd, rtol=1e-6)
        psi, psi_u, _ = evaluate_psi(PsiSpec("exp_u", 1.0, 0.5), x, u, p)
        np.testing.assert_allclose(psi_u, 0.5 * psi)

    @pytest.mark.parametrize("spec", [PsiSpec("bogus"), PsiSpec("constant", 0.0), PsiSpec("poly_x", 1.0, 9.0)])
    def test_psi_validation(self, spec):
        with pytest.raises(ConfigError):
            validate_psi(spec)

    def test_boundary_validation(self):
        with pytest.raises(ConfigError):
            validate_boundary(BoundarySpec("zero", {"a": 1.0}), 3)
        with pytest.raises(ConfigError):
            validate_boundary(BoundarySpec("quadratic", {"a": [1.0, 2.0]}), 3)
        with pytest.raises(ConfigError):
            validate_boundary(BoundarySpec("nowhere"), 3)
        with pytest.raises(ConfigError):
            validate_boundary(BoundarySpec("zero", {"layer": "smooth"}), 3)
        assert validate_boundary(BoundarySpec("zero", {"layer": "snap"}), 3).params["layer"] == "snap"

    def test_layer_slope_matches_psi_on_sphere(self):
        assert layer_slope(PsiSpec("constant", 1.0), 3, 1.0) == pytest.approx(3 ** -0.5)
        assert layer_slope(PsiSpec("poly_x", 1.0, 1.0), 3, 1.0) == pytest.approx((2.0 / 3.0) ** 0.5)
        kappa = layer_slope(PsiSpec("grad_power", 1.0, 0.5), 3, 1.0)
        assert 3.0 * kappa ** 2 == pytest.approx((1.0 + kappa ** 2) ** 0.5, rel=1e-6)

    def test_zero_data_layer(self):
        grid = build_ball_grid(3, 9)
        x = grid.points()
        psi = PsiSpec("constant", 1.0)
        extended = boundary_values(BoundarySpec("zero"), grid, x, psi)
        np.testing.assert_allclose(extended, radial_exact_solution(3)(x), atol=1e-14)
        sphere = np.array([[1.0, 0.0, 0.0], [0.6, 0.0, 0.8]])
        np.testing.assert_allclose(boundary_values(BoundarySpec("zero"), grid, sphere, psi), 0.0, atol=1e-15)
        snapped = boundary_values(BoundarySpec("zero", {"layer": "snap"}), grid, x, psi)
        assert np.all(snapped == 0.0)
        box = build_box_grid(3, 5)
        assert np.all(boundary_values(BoundarySpec("zero"), box, box.points(), psi) == 0.0)

    def test_rigidity_without_perturbation(self):
        grid = build_ball_grid(3, 9)
        x = grid.points()
        plain = boundary_values(BoundarySpec("rigidity", {"epsilon": 0.0}), grid, x)
        np.testing.assert_allclose(plain, radial_exact_solution(3)(x))

    def test_radial_vanishes_on_sphere(self):
        for s in (0, 1):
            u = radial_exact_solution(3, 2.0, s, 1.5)
            x = np.array([[1.5, 0.0, 0.0], [0.0, -1.5, 0.0], [0.9, 1.2, 0.0]])
            np.testing.assert_allclose(u(x), 0.0, atol=1e-12)

    def test_radial_slope(self):
        assert radial_slope(3) == pytest.approx(3 ** -0.5)
        assert radial_exact_solution(3)(np.zeros(3))[0] == pytest.approx(-0.5 * 3 ** -0.5)

    def test_radial_solutions_solve_the_equation(self):
        grid = build_box_grid(3, 17, [[-0.5, 0.5]] * 3)
        flat = ProblemSpec(grid, PsiSpec("constant", 2.0), BoundarySpec("zero"), 2)
        u = field_of(grid, radial_exact_solution(3, 2.0, 0))
        assert residual(u, flat).norm < 1e-10
        poly = ProblemSpec(grid, PsiSpec("poly_x", 1.0, 1.0), BoundarySpec("zero"), 2)
        u = field_of(grid, radial_exact_solution(3, 1.0, 1))
        assert residual(u, poly).norm < 1e-2

    def test_radial_validation(self):
        with pytest.raises(ConfigError):
            radial_exact_solution(2)
        with pytest.raises(ConfigError):
            radial_exact_solution(3, 1.0, 2)

    def test_exact_reference(self):
        spec, _, _ = load_problem_config(bundled_config("radial_n3.json"), grid_points=9)
        assert exact_reference(spec) is not None
        spec, _, _ = load_problem_config(bundled_config("radial_poly_n3.json"), grid_points=9)
        assert exact_reference(spec) is not None
        spec, _, _ = load_problem_config(bundled_config("exp_u_n3.json"), grid_points=9)
        assert exact_reference(spec) is None
        spec, _, _ = load_problem_config(quadratic_box_config())
        assert exact_reference(spec) is None


@pytest.mark.solver
class TestProblemConfig:
    """Parsing and validation of JSON problem configs."""

    @pytest.mark.parametrize("name", ["radial_n3.json", "quadratic_box_n3.json", "radial_poly_n3.json",
                                      "exp_u_n3.json"])
    def test_bundled(self, name):
        spec, solver, normalized = load_problem_config(bundled_config(name), grid_points=9)
        assert spec.k == spec.grid.n - 1
        assert normalized["grid_points"] == 9
        assert isinstance(solver, SolverConfig)

    @pytest.mark.parametrize("mutate", [
        lambda d: d.update(extra=1),
        lambda d: d.update(n=5),
        lambda d: d.update(n="three"),
        lambda d: d.update(domain={"type": "torus"}),
        lambda d: d.update(domain={"type": "ball", "center": [0, 0, 0]}),
        lambda d: d["psi"].update(kind="bogus"),
        lambda d: d["psi"]["params"].update(c=-1.0),
        lambda d: d["psi"]["params"].update(q=1.0),
        lambda d: d.update(solver={"tolerance": 1e-8}),
        lambda d: d.update(solver={"damping": 1.0}),
        lambda d: d.update(solver={"initial_guess": "random"}),
        lambda d: d.pop("domain"),
    ])
    def test_invalid(self, mutate):
        data = ball_config()
        mutate(data)
        with pytest.raises(ConfigError):
            build_problem(data)

    def test_missing_file(self, tmp_path):
        with pytest.raises(ConfigError):
            read_config(tmp_path / "absent.json")

    def test_bad_json(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text("{not json", encoding="utf-8")
        with pytest.raises(ConfigError):
            read_config(path)

    def test_manifest_replay(self, tmp_path):
        data = ball_config(points=11)
        path = tmp_path / "run.manifest.json"
        path.write_text(json.dumps({"config_digest": "0" * 64, "config": {"problem": data}}), encoding="utf-8")
        spec, _, _ = load_problem_config(path)
        assert spec.grid.shape == (11, 11, 11)

    def test_grid_override(self, tmp_path):
        spec, _, normalized = load_problem_config(write_config(tmp_path, ball_config()), grid_points=13)
        assert spec.grid.shape[0] == 13
        assert normalized["grid_points"] == 13


@pytest.mark.solver
class TestNewton:
    """Damped Newton with the cone barrier."""

    def test_quadratic_box_is_exact(self):
        spec, solver, _ = load_problem_config(quadratic_box_config(points=7))
        state = newton_solve(spec, solver)
        assert state.converged
        assert state.newton_iter == 0
        expected = 0.5 * np.sum(spec.grid.points() ** 2, axis=1) - 3.0
        np.testing.assert_allclose(state.u.flat, expected, atol=1e-12)

    def test_radial_ball_converges(self):
        spec, solver, _ = load_problem_config(ball_config(points=9, tol=1e-8))
        state = newton_solve(spec, solver)
        assert state.converged
        assert state.residual_norm <= 1e-8
        assert state.admissible_fraction == 1.0
        assert state.u.values[4, 4, 4] == pytest.approx(-0.5 * 3 ** -0.5, abs=1e-12)

    @pytest.mark.parametrize("name", ["radial_n3.json", "exp_u_n3.json"])
    def test_bundled_ball_configs_solve(self, name):
        spec, solver, _ = load_problem_config(bundled_config(name))
        state = newton_solve(spec, solver)
        assert state.converged
        assert state.residual_norm <= solver.tol
        assert state.admissible_fraction == 1.0
        assert all(h["admissible_fraction"] == 1.0 for h in state.history)
        g = dirichlet_field(spec.boundary, spec.grid, spec.psi)
        np.testing.assert_array_equal(state.u.flat[spec.grid.boundary_flat], g[spec.grid.boundary_flat])
        exact = exact_reference(spec)
        if exact is not None:
            interior = spec.grid.interior_flat
            error = np.max(np.abs(state.u.flat[interior] - exact(spec.grid.points(interior))))
            assert error <= spec.grid.h ** 2

    def test_exp_u_iterates_monotonically(self):
        spec, solver, _ = load_problem_config(bundled_config("exp_u_n3.json"), grid_points=9)
        state = newton_solve(spec, solver)
        assert state.converged
        assert state.newton_iter >= 1
        norms = [h["residual_norm"] for h in state.history]
        assert norms == sorted(norms, reverse=True)
        assert all(h["admissible_fraction"] == 1.0 for h in state.history)

    @pytest.mark.parametrize("psi", [
        {"kind": "constant", "params": {"c": 1.0}},
        {"kind": "poly_x", "params": {"c": 1.0, "s": 1.0}},
        {"kind": "exp_u", "params": {"c": 2.0, "s": 0.5}},
    ])
    def test_maximum_principle(self, psi):
        data = ball_config(points=11)
        data["psi"] = psi
        spec, solver, _ = load_problem_config(data)
        state = newton_solve(spec, solver)
        assert state.converged
        assert np.all(state.u.interior_values() <= 0.0)

    @pytest.mark.slow
    def test_convergence_order(self):
        errors = []
        for points in (17, 33, 65):
            spec, solver, _ = load_problem_config(bundled_config("radial_poly_n3.json"), grid_points=points)
            state = newton_solve(spec, SolverConfig(tol=1e-9))
            assert state.converged
            exact = exact_reference(spec)
            interior = spec.grid.interior_flat
            errors.append(np.max(np.abs(state.u.flat[interior] - exact(spec.grid.points(interior)))))
        ratios = [errors[0] / errors[1], errors[1] / errors[2]]
        assert all(3.0 <= r <= 5.0 for r in ratios), ratios

    def test_initial_guess_modes(self):
        spec, _, _ = load_problem_config(ball_config())
        layer = initial_guess(spec, SolverConfig(initial_guess="boundary"))
        expected = radial_exact_solution(3)(spec.grid.points())
        np.testing.assert_allclose(layer.flat, expected, atol=1e-14)
        auto = initial_guess(spec, SolverConfig(initial_guess="auto"))
        assert residual(auto, spec).admissible_fraction == 1.0
        np.testing.assert_array_equal(auto.flat, layer.flat)

    def test_snapped_layer_start(self):
        data = ball_config()
        data["boundary"]["params"] = {"layer": "snap"}
        spec, _, _ = load_problem_config(data)
        flat = initial_guess(spec, SolverConfig(initial_guess="boundary"))
        assert np.all(flat.values == 0.0)

    def test_inadmissible_start(self):
        data = ball_config()
        data["boundary"]["params"] = {"layer": "snap"}
        spec, _, _ = load_problem_config(data)
        with pytest.raises(AdmissibilityBarrierError) as exc:
            newton_solve(spec, SolverConfig(initial_guess="boundary"))
        assert exc.value.state is not None
        assert exc.value.state.admissible_fraction == 0.0

    def test_linear_solver_failure(self):
        spec, solver, _ = load_problem_config(bundled_config("exp_u_n3.json"), grid_points=9)
        stub = (np.zeros(spec.grid.interior_count), 9)
        with patch("hesslab.solver.newton.spla.bicgstab", return_value=stub):
            with pytest.raises(LinearSolveError) as exc:
                newton_solve(spec, solver)
        assert exc.value.details["info"] == 9
        assert exc.value.state.newton_iter == 0

    def test_iteration_cap(self):
        spec, _, _ = load_problem_config(bundled_config("exp_u_n3.json"), grid_points=9)
        state = newton_solve(spec, SolverConfig(tol=1e-15, max_iter=1))
        assert not state.converged
        assert state.newton_iter == 1
        assert len(state.history) == 1

    def test_dirichlet_data_preserved(self):
        spec, solver, _ = load_problem_config(bundled_config("radial_poly_n3.json"), grid_points=9)
        state = newton_solve(spec, solver)
        g = dirichlet_field(spec.boundary, spec.grid)
        boundary = spec.grid.boundary_flat
        np.testing.assert_array_equal(state.u.flat[boundary], g[boundary])


@pytest.mark.solver
class TestSnapshot:
    """Binary snapshots and CSV export."""

    @pytest.mark.parametrize("grid", [build_ball_grid(3, 9, 1.5), build_box_grid(3, 5, [[0.0, 2.0]] * 3)])
    def test_round_trip(self, tmp_path, grid):
        rng = np.random.default_rng(3)
        u = ScalarField(grid, rng.standard_normal(grid.size))
        path = write_snapshot(tmp_path / "u.hess", u)
        back = read_snapshot(path)
        assert back.grid.descriptor() == grid.descriptor()
        np.testing.assert_array_equal(back.values, u.values)
        np.testing.assert_array_equal(back.grid.mask, grid.mask)

    def test_bad_magic(self, tmp_path):
        path = tmp_path / "u.hess"
        path.write_bytes(b"NOPE" + bytes(64))
        with pytest.raises(SnapshotError):
            read_snapshot(path)

    def test_truncated_payload(self, tmp_path):
        grid = build_box_grid(3, 4)
        path = write_snapshot(tmp_path / "u.hess", ScalarField(grid, np.zeros(grid.size)))
        path.write_bytes(path.read_bytes()[:-8])
        with pytest.raises(SnapshotError) as exc:
            read_snapshot(path)
        assert exc.value.details["expected_bytes"] == grid.size * 8

    def test_truncated_header(self, tmp_path):
        grid = build_box_grid(3, 4)
        path = write_snapshot(tmp_path / "u.hess", ScalarField(grid, np.zeros(grid.size)))
        path.write_bytes(path.read_bytes()[:12])
        with pytest.raises(SnapshotError):
            read_snapshot(path)

    def test_missing(self, tmp_path):
        with pytest.raises(SnapshotError):
            read_snapshot(tmp_path / "absent.hess")

    def test_export_csv(self, tmp_path):
        grid = build_box_grid(3, 5)
        u = field_of(grid, lambda x: 0.5 * np.sum(x ** 2, axis=1))
        rows = export_csv(tmp_path / "u.csv", u)
        assert rows == grid.interior_count
        lines = (tmp_path / "u.csv").read_text().splitlines()
        assert lines[0].split(",") == ["x_1", "x_2", "x_3", "u", "lambda_1", "lambda_2", "lambda_3",
                                       "sigma_n_minus_1"]
        assert len(lines) == rows + 1
        assert float(lines[1].split(",")[-1]) == pytest.approx(3.0)
