#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Tests for the concavity inequality, its certificate, the samplers and the
verification campaign.
"""

import sys
from pathlib import Path
from unittest.mock import patch

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent.parent.parent))

from hesslab.algebra.symmfunc import in_cone_batch, sigma, sigma_batch
from hesslab.concavity.campaign import (
    evaluate_chunk, homogeneity_error, plan_chunks, run_campaign, search_constants, verdict_mask,
)
from hesslab.concavity.certificate import (
    certificate_determinant_bound, certificate_matrix, certificate_minors, determinant_lemma_residual,
    rank_one_update_definite,
)
from hesslab.concavity.inequality import (
    classify_branch, deficit, deficit_terms_batch, fii_lambda_identity, fiijj_lambda_identity,
    lambda_lower_bound, default_A, default_constants, default_delta0, semiconvex_subcase,
    sigma_n_representation_check, worst_direction, worst_direction_batch,
)
from hesslab.concavity.sampler import sample_batch, sample_cone, sample_gamma_k_batch, sample_xi
from hesslab.config import CHUNK_SIZE
from hesslab.errors import ArgumentError, ConfigError, DegenerateGapError, PreconditionError, SamplerError
from hesslab.models.concavity import Branch, BranchConstants, ConcavityInstance
from hesslab.models.spectrum import EigenvalueVector


def instance(values, m=1, xi=None, K=9.0, delta0=1.0 / 15.0):
    lam = EigenvalueVector.of(values, sort=True)
    xi = np.ones(lam.n) if xi is None else np.asarray(xi, dtype=float)
    return ConcavityInstance(lam, m, xi, K, delta0)


class TestConstants:
    """Proof constants and their validation."""

    def test_default_values_n3(self):
        c = default_constants(3)
        assert c.delta0 == pytest.approx(1.0 / 15.0)
        assert c.K == 9.0
        assert c.A == pytest.approx(2.1)
        assert c.C_lambda1 == c.A

    def test_delta0_shrinks_with_n(self):
        assert default_delta0(4) == pytest.approx(1.0 / 24.0)
        assert default_delta0(5) == pytest.approx(1.0 / 35.0)

    def test_A_exceeds_floor(self):
        for n in (3, 4, 5):
            assert default_A(n) > 4.0 ** (1.0 / (n - 1))

    def test_large_delta0_rejected(self):
        with pytest.raises(ConfigError):
            BranchConstants(n=3, A=2.1, C_lambda1=2.1, delta0=0.9, K=9.0)

    def test_small_A_rejected(self):
        with pytest.raises(ConfigError):
            BranchConstants(n=3, A=1.5, C_lambda1=2.0, delta0=0.05, K=9.0)

    def test_round_trip(self):
        c = default_constants(4)
        assert BranchConstants.from_dict(c.to_dict()) == c


class TestDeficit:
    """Point evaluation of LHS − RHS."""

    def test_full_multiplicity_closed_form(self):
        """λ = t(1, 1, 1), ξ = e₁: deficit = 4K/3 − 2(1 + δ₀) independent of t."""
        for t in (1.0, 3.0 ** -0.5, 7.0):
            report = deficit(instance([t, t, t], m=3, xi=[1.0, 0.0, 0.0]))
            assert report.branch is Branch.FULL_MULTIPLICITY
            assert report.deficit == pytest.approx(4 * 9 / 3 - 2 * (1 + 1 / 15), rel=1e-12)
            assert report.deficit == pytest.approx(9.8667, abs=1e-4)

    def test_semiconvex_example(self):
        """λ = (3, 2, 1), ξ = (1, 1, 1): terms −6, 9·144/11, 13 and (16/15)·1."""
        report = deficit(instance([3.0, 2.0, 1.0]))
        assert report.branch is Branch.SEMICONVEX
        assert report.cross == pytest.approx(-6.0)
        assert report.square == pytest.approx(9 * 144 / 11)
        assert report.gap == pytest.approx(13.0)
        assert report.rhs == pytest.approx(16 / 15)
        assert report.deficit == pytest.approx(-6 + 9 * 144 / 11 + 13 - 16 / 15)
        assert report.semiconvex_subcase == "mild"
        assert report.certificate_ok is None

    def test_term_breakdown_sums_to_deficit(self):
        report = deficit(instance([4.0, 1.0, 0.5, -0.2]))
        t = report.term_breakdown
        assert t["cross"] + t["square"] + t["gap"] - t["rhs"] == pytest.approx(report.deficit)

    def test_nonsemiconvex_carries_certificate(self):
        report = deficit(instance([10.0, 9.0, -3.0]))
        assert report.branch is Branch.NONSEMICONVEX
        assert isinstance(report.certificate_ok, bool)
        assert report.semiconvex_subcase is None

    def test_unsorted_rejected(self):
        lam = EigenvalueVector(np.array([1.0, 2.0, 3.0]))
        with pytest.raises(ArgumentError):
            deficit(ConcavityInstance(lam, 1, np.ones(3), 9.0, 0.05))

    def test_outside_cone(self):
        with pytest.raises(PreconditionError):
            deficit(instance([1.0, -2.0, -3.0]))

    def test_degenerate_gap(self):
        """m = 1 while λ₁ = λ₂."""
        with pytest.raises(DegenerateGapError):
            deficit(instance([3.0, 3.0, 1.0], m=1))

    def test_multiplicity_must_match(self):
        with pytest.raises(ArgumentError):
            deficit(instance([3.0, 2.0, 1.0], m=2, xi=[1.0, 0.0, 1.0]))

    def test_xi_must_vanish_on_cluster(self):
        with pytest.raises(ArgumentError):
            instance([3.0, 3.0, 1.0], m=2, xi=[1.0, 1.0, 1.0])

    def test_small_dimension_rejected(self):
        with pytest.raises(ArgumentError):
            deficit(instance([2.0, 1.0], xi=[1.0, 1.0]))

    def test_homogeneity(self):
        """deficit(tλ) = t^{n−3} deficit(λ)."""
        base = deficit(instance([4.0, 1.0, 0.5, -0.2])).deficit
        scaled = deficit(instance([8.0, 2.0, 1.0, -0.4])).deficit
        assert scaled == pytest.approx(2.0 * base, rel=1e-12)

    def test_subcase_strong(self):
        """σ₂(λ|1) far below −σ₂/31 gives the strong subcase."""
        values = np.array([5.0, 0.5, -0.4])
        assert sigma(values, 2) > 0
        assert semiconvex_subcase(values) == "strong"

    def test_classify_branch(self):
        lams = np.array([[1.0, 1.0, 1.0], [10.0, 9.0, -3.0], [3.0, 2.0, 1.0]])
        labels = classify_branch(lams, np.array([3, 1, 1]), 2.1)
        assert list(labels) == ["full_multiplicity", "nonsemiconvex", "semiconvex"]


class TestWorstDirection:
    """The quadratic-form minimum bounds every sampled direction."""

    def test_lower_bounds_random_directions(self):
        rng = np.random.default_rng(11)
        for n in (3, 4, 5):
            lams, ms = sample_batch(rng, n, n - 1, "clustered_top", 200)
            worst = worst_direction_batch(lams, ms, n * n, default_delta0(n))
            for _ in range(5):
                xis = sample_xi(rng, ms, n)
                terms = deficit_terms_batch(lams, ms, xis)
                values = (terms["cross"] + n * n * terms["square"] + terms["gap"]
                          - (1 + default_delta0(n)) * terms["rhs"])
                scale = 1.0 + np.abs(values) + np.abs(worst) + n * n * np.abs(terms["square"])
                assert np.all(values >= worst - 1e-9 * scale)

    def test_scalar_matches_batch(self):
        lam = EigenvalueVector.of([3.0, 2.0, 1.0], sort=True)
        batch = worst_direction_batch(lam.values[None, :], np.array([1]), 9.0, 1 / 15)[0]
        assert worst_direction(lam, 1, 9.0, 1 / 15) == pytest.approx(batch)

    def test_full_multiplicity_axis(self):
        """Only ξ₁ is free when m = n, so the minimum is the closed form."""
        lam = EigenvalueVector.of([1.0, 1.0, 1.0], sort=True)
        assert worst_direction(lam, 3, 9.0, 1 / 15) == pytest.approx(4 * 9 / 3 - 2 * (1 + 1 / 15))


class TestIdentities:
    """Closed forms in Λ = −σ_n."""

    @pytest.mark.parametrize("values", [[3.0, 2.0, 1.0], [5.0, 1.0, 0.5, -0.3], [2.0, 1.5, 1.0, 0.7, -0.2]])
    def test_fii(self, values):
        lam = EigenvalueVector.of(values, sort=True)
        for i in range(lam.n):
            assert abs(fii_lambda_identity(lam, i)) <= 1e-10 * (1 + abs(sigma(lam, lam.n - 2, (i,))))

    @pytest.mark.parametrize("values", [[3.0, 2.0, 1.0], [5.0, 1.0, 0.5, -0.3]])
    def test_fiijj(self, values):
        lam = EigenvalueVector.of(values, sort=True)
        n = lam.n
        for i in range(n):
            for j in range(n):
                if i != j:
                    ref = sigma(lam, n - 3, (i, j))
                    assert abs(fiijj_lambda_identity(lam, i, j)) <= 1e-10 * (1 + abs(ref))

    def test_sigma_n_representation(self):
        rng = np.random.default_rng(5)
        lams, _ = sample_batch(rng, 4, 3, "interior", 100)
        for lam in lams:
            xi = rng.standard_normal(4)
            big = -sigma(lam, 4)
            terms = deficit_terms_batch(lam[None, :], np.array([4]), xi[None, :])
            scale = (1.0 + abs(terms["cross"][0]) + abs(terms["square"][0])
                     + big ** 2 * np.sum(np.abs(xi) / lam ** 2) ** 2 + np.sum(xi ** 2 / lam ** 2)
                     + abs(2 * big * np.sum(xi ** 2 / lam ** 3)))
            assert sigma_n_representation_check(EigenvalueVector(lam, sorted=True), xi) <= 1e-9 * scale

    def test_zero_entry_rejected(self):
        lam = EigenvalueVector.of([2.0, 1.0, 0.0], sort=True)
        with pytest.raises(PreconditionError):
            fii_lambda_identity(lam, 2)
        with pytest.raises(PreconditionError):
            sigma_n_representation_check(lam, [1.0, 1.0, 1.0])

    def test_distinct_indices_required(self):
        with pytest.raises(ArgumentError):
            fiijj_lambda_identity(EigenvalueVector.of([3.0, 2.0, 1.0], sort=True), 1, 1)

    def test_lambda_lower_bound(self):
        """Λ − A²λ₁ = 270 − 4.41·10 at (10, 9, −3)."""
        lam = EigenvalueVector.of([10.0, 9.0, -3.0], sort=True)
        assert lambda_lower_bound(lam, 2.1) == pytest.approx(270.0 - 44.1)

    def test_lambda_lower_bound_on_samples(self):
        rng = np.random.default_rng(3)
        A = default_A(3)
        lams, _ = sample_batch(rng, 3, 2, "large_negative", 300, A=A)
        for lam in lams:
            big = -sigma(lam, 3)
            assert lambda_lower_bound(EigenvalueVector(lam, sorted=True), A) >= -1e-9 * (1.0 + abs(big))

    def test_lambda_lower_bound_branch(self):
        with pytest.raises(PreconditionError):
            lambda_lower_bound(EigenvalueVector.of([3.0, 2.0, 1.0], sort=True), 2.1)


class TestCertificate:
    """yᵀy + D and the determinant lemma."""

    def test_matrix_entries(self):
        lam = EigenvalueVector.of([10.0, 9.0, -3.0], sort=True)
        y, d = certificate_matrix(lam, 1, 1 / 15, 2.1)
        assert y.shape == d.shape == (3,)
        np.testing.assert_allclose(y, np.sqrt(270.0 / 33.0))
        assert d[0] == pytest.approx((1 - 1 / 15 - (1 / 15) * 33 / 2.1 ** 2) * 10)
        assert d[1] == pytest.approx(180.0)
        assert d[2] == pytest.approx(-60.0 / 13.0)

    def test_minors_match_determinants(self):
        rng = np.random.default_rng(9)
        for size in range(1, 9):
            y = rng.standard_normal(size)
            d = rng.uniform(0.5, 2.0, size) * rng.choice([-1.0, 1.0], size)
            minors = certificate_minors(y, d)
            full = np.outer(y, y) + np.diag(d)
            for j in range(size):
                ref = np.linalg.det(full[:j + 1, :j + 1])
                assert minors[j] == pytest.approx(ref, rel=1e-10, abs=1e-10)

    def test_lemma_residual(self):
        rng = np.random.default_rng(10)
        for _ in range(200):
            size = int(rng.integers(1, 9))
            y = rng.standard_normal(size)
            d = rng.uniform(0.1, 3.0, size)
            assert determinant_lemma_residual(y, d) <= 1e-10 * max(1.0, np.prod(d) * (1 + np.sum(y ** 2 / d)))

    def test_diagonal_matrix_accepted(self):
        assert determinant_lemma_residual([1.0, 2.0], np.diag([1.0, 3.0])) < 1e-12

    def test_singular_d(self):
        with pytest.raises(PreconditionError):
            certificate_minors([1.0, 1.0], [1.0, 0.0])

    def test_non_diagonal_rejected(self):
        with pytest.raises(ArgumentError):
            certificate_minors([1.0, 1.0], [[1.0, 0.5], [0.5, 1.0]])

    def test_definiteness(self):
        assert rank_one_update_definite([1.0, 1.0, 1.0], [1.0, 2.0, 3.0])
        assert not rank_one_update_definite([0.1, 0.1], [1.0, -1.0])
        assert not rank_one_update_definite([0.1, 0.1], [-1.0, 1.0])

    def test_certificate_needs_branch(self):
        lam = EigenvalueVector.of([3.0, 2.0, 1.0], sort=True)
        with pytest.raises(PreconditionError):
            certificate_matrix(lam, 1, 1 / 15, 2.1)

    def test_determinant_bound_formula(self):
        lam = EigenvalueVector.of([10.0, 9.0, -3.0], sort=True)
        _, d = certificate_matrix(lam, 1, 1 / 15, 2.1)
        expected = (0.5 - 270.0 / (6 * 33.0 * 10.0)) - (1 + 270.0 / 33.0 * np.sum(1 / d))
        assert certificate_determinant_bound(lam, 1, 1 / 15, 2.1) == pytest.approx(expected)


class TestSampler:
    """Seeded spectra for the campaign."""

    @pytest.mark.parametrize("profile", ["interior", "near_boundary", "large_negative", "clustered_top"])
    @pytest.mark.parametrize("n", [3, 4, 5])
    def test_profiles(self, n, profile):
        rng = np.random.default_rng(n)
        A = default_A(n)
        lams, ms = sample_batch(rng, n, n - 1, profile, 300, A=A)
        assert lams.shape == (300, n)
        assert np.all(np.diff(lams, axis=1) <= 0)
        assert np.all(in_cone_batch(lams, n - 1))
        np.testing.assert_allclose(sigma_batch(lams, n - 1), 1.0, rtol=1e-6)
        if profile == "large_negative":
            assert np.all(lams[:, -1] <= -A)
        if profile == "clustered_top":
            assert np.any(ms > 1)
            for lam, m in zip(lams, ms):
                np.testing.assert_allclose(lam[:m], lam[0], rtol=1e-12)
                if m < n:
                    assert lam[0] - lam[m] > 1e-9 * max(1.0, abs(lam[0]))
        else:
            assert np.all(ms == 1)

    def test_unnormalized(self):
        rng = np.random.default_rng(1)
        lams, _ = sample_batch(rng, 4, 3, "interior", 50, normalize=False)
        assert not np.allclose(sigma_batch(lams, 3), 1.0)

    def test_deterministic(self):
        first = [(lam.values.tolist(), m) for lam, m in sample_cone(4, 3, "near_boundary", 42, 20)]
        second = [(lam.values.tolist(), m) for lam, m in sample_cone(4, 3, "near_boundary", 42, 20)]
        assert first == second

    def test_general_order(self):
        rng = np.random.default_rng(2)
        lams, ms = sample_batch(rng, 6, 3, "near_boundary", 100)
        assert np.all(in_cone_batch(lams, 3))
        np.testing.assert_allclose(sigma_batch(lams, 3), 1.0, rtol=1e-6)

    def test_gamma_k_near_boundary(self):
        rng = np.random.default_rng(4)
        lams = sample_gamma_k_batch(rng, 5, 2, 100, near_boundary=True)
        assert np.all(in_cone_batch(lams, 2))

    def test_profile_restricted_to_top_order(self):
        with pytest.raises(ArgumentError):
            sample_batch(np.random.default_rng(0), 5, 2, "clustered_top", 10)

    def test_large_negative_needs_A(self):
        with pytest.raises(ArgumentError):
            sample_batch(np.random.default_rng(0), 3, 2, "large_negative", 10)

    def test_unknown_profile(self):
        with pytest.raises(ValueError):
            sample_batch(np.random.default_rng(0), 3, 2, "bogus", 10)

    def test_attempt_budget(self):
        """An unreachable threshold exhausts the budget."""
        with patch("hesslab.concavity.sampler.SAMPLER_MAX_ATTEMPTS", 50):
            with pytest.raises(SamplerError):
                sample_batch(np.random.default_rng(0), 3, 2, "large_negative", 10, A=1e12)

    def test_xi_admissible(self):
        rng = np.random.default_rng(6)
        ms = np.array([1, 2, 3, 4, 2, 1, 3, 2, 4, 1])
        xi = sample_xi(rng, ms, 4)
        np.testing.assert_allclose(np.linalg.norm(xi, axis=1), 1.0)
        for row, m in zip(xi, ms):
            assert np.all(row[1:m] == 0.0)
        axis_rows = xi[4::5]
        assert np.all(np.sum(axis_rows != 0.0, axis=1) == 1)


class TestCampaign:
    """Chunked campaign, verdict and constant search."""

    def test_plan_chunks(self):
        chunks = plan_chunks(2 * CHUNK_SIZE + 5, ["interior", "near_boundary"])
        assert sum(size for _, size in chunks) == 2 * CHUNK_SIZE + 5
        assert all(size <= CHUNK_SIZE for _, size in chunks)
        assert {p for p, _ in chunks} == {"interior", "near_boundary"}

    def test_plan_chunks_validation(self):
        with pytest.raises(ArgumentError):
            plan_chunks(0, ["interior"])
        with pytest.raises(ValueError):
            plan_chunks(10, ["nowhere"])

    def test_chunk_arrays(self):
        constants = default_constants(3)
        arrays = evaluate_chunk(3, "large_negative", 50, np.random.SeedSequence(1), constants)
        assert arrays["lams"].shape == (50, 3)
        assert set(arrays["branch"]) == {"nonsemiconvex"}
        assert np.all(np.isin(arrays["certificate"], [0.0, 1.0]))

    def test_n3_campaign_passes(self):
        constants = default_constants(3)
        result = run_campaign(3, 4000, constants, seed=1, progress=False)
        s = result.summary
        assert result.size == 4000
        assert s["samples"] == 4000
        assert s["counted"] + s["excluded"] == 4000
        assert s["homogeneity_error"] < 1e-10
        assert sum(s["profiles"].values()) == 4000
        assert result.passed
        full = s["branches"]["full_multiplicity"]
        if full["counted"]:
            assert full["min_deficit"] >= 4 * 9 / 3 - 2 * (1 + 1 / 15) - 1e-9

    def test_thread_count_does_not_change_output(self):
        constants = default_constants(4)
        one = run_campaign(4, 2 * CHUNK_SIZE + 10, constants, seed=3, threads=1, progress=False)
        many = run_campaign(4, 2 * CHUNK_SIZE + 10, constants, seed=3, threads=3, progress=False)
        for key in ("lams", "xis", "deficit", "worst"):
            np.testing.assert_array_equal(one.arrays[key], many.arrays[key])

    def test_constants_dimension_mismatch(self):
        with pytest.raises(ConfigError):
            run_campaign(4, 10, default_constants(3), seed=0, progress=False)

    def test_verdict_mask_keeps_full_multiplicity(self):
        arrays = {"lams": np.array([[0.5, 0.5, 0.5], [0.5, 0.4, 0.1], [3.0, 1.0, -0.5]]),
                  "branch": np.array(["full_multiplicity", "semiconvex", "semiconvex"], dtype=object)}
        np.testing.assert_array_equal(verdict_mask(arrays, 2.0), [True, False, True])

    def test_homogeneity_error_small(self):
        rng = np.random.default_rng(8)
        lams, ms = sample_batch(rng, 5, 4, "interior", 64)
        xis = sample_xi(rng, ms, 5)
        assert homogeneity_error(lams, ms, xis, 25.0, default_delta0(5)) < 1e-10

    def test_search(self):
        constants = default_constants(3)
        result = run_campaign(3, 2000, constants, seed=5, progress=False)
        found = search_constants(result.arrays, A=constants.A, min_samples=1000)
        assert found.grid
        assert any(p.default_candidate for p in found.grid)
        if found.verified:
            rank = (found.constants.C_lambda1, found.constants.K, -found.constants.delta0)
            for p in found.grid:
                if p.verified:
                    assert rank <= (p.C_lambda1, p.K, -p.delta0)

    def test_search_needs_samples(self):
        constants = default_constants(3)
        result = run_campaign(3, 100, constants, seed=5, progress=False)
        with pytest.raises(ConfigError):
            search_constants(result.arrays, A=constants.A, min_samples=1000)
        with pytest.raises(ConfigError):
            search_constants({"lams": np.zeros((0, 3))}, A=constants.A)
