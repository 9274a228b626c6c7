#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tests for the Pogorelov scans, the quadratic fit and the rigidity probe.
"""

import sys
from pathlib import Path
from unittest.mock import patch

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from hesslab.errors import AdmissibilityBarrierError, ArgumentError, NumericalError, PreconditionError
from hesslab.experiments import pogorelov
from hesslab.experiments.fit import fit_quadratic, quadratic_fit
from hesslab.experiments.pogorelov import (
    beta_threshold, localization_weight, pogorelov_scan, pogorelov_sweep, refinement_change,
)
from hesslab.experiments.rigidity import decay_holds, holder_proxy, rigidity_experiment, rigidity_row
from hesslab.models.experiment import RigidityRow
from hesslab.models.solver import ScalarField
from hesslab.solver.boundary import rigidity_perturbation
from hesslab.solver.exact import radial_exact_solution
from hesslab.solver.grid import build_ball_grid, build_box_grid

W = 3 ** -0.5


def radial_field(points=9):
    grid = build_ball_grid(3, points)
    return ScalarField(grid, radial_exact_solution(3)(grid.points()))


def row(R, holder, fit, ok=True):
    return RigidityRow(R=R, h=0.25 * R, hessian_center=(), deviation=0.0, holder_proxy=holder,
                       fit_residual=fit, newton_iter=1, ok=ok)


class TestPogorelov:
    """(−u)^β λ₁ and the test function on the radial solution."""

    def test_beta_one_sup_at_center(self):
        scan = pogorelov_scan(radial_field(), 1.0)
        assert scan.sup_value == pytest.approx(W * W / 2, rel=1e-10)
        assert scan.sup_value == pytest.approx(1 / 6, rel=1e-10)
        np.testing.assert_allclose(scan.argmax, 0.0, atol=1e-12)
        assert scan.argmax_interior
        assert scan.localization_weight is None

    def test_field_per_interior_point(self):
        u = radial_field()
        scan = pogorelov_scan(u, 2.0)
        assert scan.field.shape == (u.grid.interior_count,)
        np.testing.assert_allclose(scan.field, (-u.interior_values()) ** 2 * W, rtol=1e-10)
        assert scan.to_dict()["grid"]["domain"] == "ball"
        assert "B" not in scan.to_dict()

    def test_sweep_decreases_with_beta(self):
        """−u < 1 everywhere, so larger β gives a smaller supremum."""
        sups = [s.sup_value for s in pogorelov_sweep(radial_field(), [1.0, 2.0, 4.0])]
        assert sups == sorted(sups, reverse=True)

    def test_requires_negative_interior(self):
        u = radial_field()
        with pytest.raises(PreconditionError):
            pogorelov_scan(ScalarField(u.grid, -u.values), 1.0)

    def test_negative_beta(self):
        with pytest.raises(ArgumentError):
            pogorelov_scan(radial_field(), -1.0)

    def test_function_variants(self):
        u = radial_field()
        grad = pogorelov.test_function_field(u, 4.0, B=0.0, variant="gradient")
        expected = np.log(W) + 4.0 * np.log(-u.interior_values())
        np.testing.assert_allclose(grad.values, expected, rtol=1e-10)
        np.testing.assert_allclose(grad.argmax, 0.0, atol=1e-12)
        pos = pogorelov.test_function_field(u, 4.0, variant="position")
        x = u.grid.points(u.grid.interior_flat)
        np.testing.assert_allclose(pos.values, expected + 0.5 * np.sum(x ** 2, axis=1), rtol=1e-10)
        with pytest.raises(ArgumentError):
            pogorelov.test_function_field(u, 4.0, variant="curvature")

    def test_localization_weight(self):
        assert localization_weight([3.0, 1.0, 0.0], 2.0) == pytest.approx(0.0)
        assert localization_weight([1.0, 3.0, 0.0], 6.0) == pytest.approx(0.5)
        assert localization_weight([2.0, 2.0, 2.0], 6.0) is None

    def test_beta_threshold(self):
        assert beta_threshold(3, 1 / 15) == pytest.approx(30.0)
        assert beta_threshold(3, 0.5) == pytest.approx(6.0)

    def test_refinement_change(self):
        assert refinement_change({9: 1.0}) is None
        assert refinement_change({33: 1.0, 9: 5.0, 17: 1.1}) == pytest.approx(0.1)


class TestFit:
    """Least-squares quadratic fit."""

    def test_recovers_quadratic(self):
        rng = np.random.default_rng(0)
        x = rng.standard_normal((60, 3))
        A = np.array([[2.0, 0.5, 0.0], [0.5, 1.0, -0.3], [0.0, -0.3, 3.0]])
        b = np.array([1.0, -2.0, 0.5])
        values = 0.5 * np.einsum("bi,ij,bj->b", x, A, x) + x @ b - 4.0
        fit = fit_quadratic(x, values)
        np.testing.assert_allclose(fit.A, A, atol=1e-10)
        np.testing.assert_allclose(fit.b, b, atol=1e-10)
        assert fit.c == pytest.approx(-4.0)
        assert fit.max_residual < 1e-10

    def test_field_fit(self):
        fit = quadratic_fit(radial_field())
        np.testing.assert_allclose(fit.A, W * np.eye(3), atol=1e-10)
        assert fit.c == pytest.approx(-0.5 * W)

    def test_too_few_points(self):
        with pytest.raises(ArgumentError):
            fit_quadratic(np.zeros((5, 3)), np.zeros(5))

    def test_rank_deficient(self):
        x = np.zeros((20, 3))
        x[:, 0] = np.linspace(-1.0, 1.0, 20)
        with pytest.raises(NumericalError):
            fit_quadratic(x, x[:, 0] ** 2)


class TestRigidity:
    """Growing balls with perturbed radial boundary data."""

    def test_holder_proxy(self):
        t = np.linspace(-1.0, 1.0, 9)
        y = np.stack([t, np.zeros(9), np.zeros(9)], axis=1)
        mats = t[:, None, None] * np.eye(3)[None]
        assert holder_proxy(y, mats) == pytest.approx(np.sqrt(3.0))
        assert holder_proxy(y, np.broadcast_to(np.eye(3), (9, 3, 3))) == 0.0

    def test_unperturbed_balls_are_quadratic(self):
        rows = rigidity_experiment(n=3, radii=[1.0, 2.0], epsilon=0.0, points=9, threads=1, progress=False)
        assert [r.R for r in rows] == [1.0, 2.0]
        for r in rows:
            assert r.ok
            assert r.newton_iter == 0
            assert r.deviation < 1e-10
            assert r.fit_residual < 1e-10
            np.testing.assert_allclose(r.hessian_center, W * np.eye(3), atol=1e-10)
        assert decay_holds(rows, 0.0)

    def test_thread_count_keeps_order(self):
        rows = rigidity_experiment(n=3, radii=[1.0, 1.5, 2.0], epsilon=0.0, points=9, threads=3, progress=False)
        assert [r.R for r in rows] == [1.0, 1.5, 2.0]

    def test_failed_solve_marks_row(self):
        with patch("hesslab.experiments.rigidity.newton_solve",
                   side_effect=AdmissibilityBarrierError("stuck")):
            r = rigidity_row(3, 2.0, 0.1, points=9)
        assert not r.ok
        assert r.newton_iter == -1
        assert "stuck" in r.message
        assert not decay_holds([r], 0.1)

    @pytest.mark.parametrize("radii", [[], [1.0, -2.0], [2.0, 1.0]])
    def test_radii_validation(self, radii):
        with pytest.raises(ArgumentError):
            rigidity_experiment(radii=radii, progress=False)

    def test_decay_with_perturbation(self):
        assert decay_holds([row(1.0, 2.0, 0.3), row(2.0, 1.0, 0.1)], 0.1)
        assert not decay_holds([row(1.0, 1.0, 0.3), row(2.0, 2.0, 0.1)], 0.1)
        assert not decay_holds([row(1.0, 2.0, 0.1), row(2.0, 1.0, 0.3)], 0.1)
        assert not decay_holds([], 0.1)

    def test_decay_accepts_flat_columns(self):
        assert decay_holds([row(1.0, 1.5, 0.2), row(2.0, 1.5, 0.2), row(4.0, 1.5, 0.2)], 0.05)

    def test_default_perturbation_grows_like_r_squared(self):
        x = np.array([[0.0, 4.0, 0.0]])
        value = rigidity_perturbation(x, 4.0, 0.05)
        assert value[0] == pytest.approx(0.05 * 16.0 * np.e, rel=1e-12)
        assert rigidity_perturbation(x, 4.0, 0.05, gamma=1.0)[0] == pytest.approx(0.05 * 4.0 * np.e, rel=1e-12)

    @pytest.mark.slow
    def test_perturbed_balls_end_to_end(self):
        rows = rigidity_experiment(n=3, radii=[1.0, 2.0, 4.0], epsilon=0.05, points=9, threads=1, progress=False)
        for r in rows:
            assert r.ok
            assert r.newton_iter >= 1
            assert r.deviation > 1e-3
            assert r.fit_residual > 0.0
        # the rescaled problems coincide on the unit ball
        assert rows[1].holder_proxy == pytest.approx(rows[0].holder_proxy, rel=1e-8)
        assert rows[2].fit_residual == pytest.approx(rows[0].fit_residual, rel=1e-8)
        assert decay_holds(rows, 0.05)

    def test_decay_without_perturbation(self):
        assert decay_holds([row(1.0, 0.0, 1e-3)], 0.0)
        assert not decay_holds([row(1.0, 0.0, 1.0)], 0.0)

    def test_box_grids_unaffected(self):
        """Fit accepts any interior point set."""
        grid = build_box_grid(3, 5)
        u = ScalarField(grid, np.sum(grid.points() ** 2, axis=1))
        np.testing.assert_allclose(quadratic_fit(u).A, 2.0 * np.eye(3), atol=1e-10)
