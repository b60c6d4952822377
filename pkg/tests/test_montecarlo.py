from __future__ import annotations

import math

import numpy as np
import pytest

from matcon import (
    Finite,
    FiniteSummand,
    FixedRademacher,
    MCConfig,
    MEAN,
    MEDIAN_OF_MEANS,
    as_hermitian,
    bound_report,
    brute_force_expected_norm,
    collect_samples,
    empirical_second_moments,
    estimate_max_summand_sq,
    estimate_norm_moment,
    make_example,
    make_model,
    spectral_norm,
)
from matcon.montecarlo import default_blocks


def rand_hermitian(rng, d):
    g = rng.normal(size=(d, d)) + 1j * rng.normal(size=(d, d))
    return as_hermitian((g + g.conj().T) / 2)


def basis_diag(i, d):
    e = np.zeros((d, d))
    e[i, i] = 1.0
    return e


class TestMCConfig:
    def test_requires_two_samples(self):
        with pytest.raises(ValueError):
            MCConfig(samples=1, seed=0)

    def test_blocks_must_divide(self):
        with pytest.raises(ValueError):
            MCConfig(samples=100, seed=0, estimator=MEDIAN_OF_MEANS, blocks=7)

    def test_blocks_meaningless_for_mean(self):
        with pytest.raises(ValueError):
            MCConfig(samples=100, seed=0, estimator=MEAN, blocks=4)

    def test_default_blocks_rule(self):
        assert default_blocks(200) == 8
        assert default_blocks(400) == 16
        assert default_blocks(1000) == 8
        assert default_blocks(1_000_000) == 16
        assert default_blocks(6) == 2

    def test_auto_blocks_filled(self):
        cfg = MCConfig(samples=400, seed=0, estimator=MEDIAN_OF_MEANS)
        assert cfg.blocks == 16

    def test_unknown_estimator(self):
        with pytest.raises(ValueError):
            MCConfig(samples=10, seed=0, estimator="mode")


class TestNormMoment:
    def test_deterministic_summand_exact(self):
        m = np.diag([3.0, -1.0])
        model = make_model([Finite(FiniteSummand([(1.0, m)]))])
        for r in (1, 2):
            est = estimate_norm_moment(model, r=r, cfg=MCConfig(samples=50, seed=1))
            assert est.mean == pytest.approx(3.0**r)
            assert est.std_error == 0.0

    def test_matches_enumeration_within_3se(self):
        rng = np.random.default_rng(2)
        hs = [rand_hermitian(rng, 2) for _ in range(3)]
        model = make_model([FixedRademacher(h) for h in hs])
        exact = brute_force_expected_norm(
            [FiniteSummand([(0.5, h.array), (0.5, -h.array)]) for h in hs], r=2
        )
        est = estimate_norm_moment(model, r=2, cfg=MCConfig(samples=4000, seed=3))
        assert abs(est.mean - exact) <= 3.0 * est.std_error

    def test_bit_identical_reruns(self):
        model = make_example("sec73", d=3)
        cfg = MCConfig(samples=500, seed=9)
        a = estimate_norm_moment(model, r=2, cfg=cfg)
        b = estimate_norm_moment(model, r=2, cfg=cfg)
        assert a == b

    def test_rejects_bad_moment_order(self):
        model = make_example("sec73", d=2)
        with pytest.raises(ValueError):
            estimate_norm_moment(model, r=3, cfg=MCConfig(samples=10, seed=0))


class TestMaxSummandSq:
    def test_fixed_rademacher_exact(self):
        rng = np.random.default_rng(4)
        hs = [rand_hermitian(rng, 3) for _ in range(4)]
        model = make_model([FixedRademacher(h) for h in hs])
        est = estimate_max_summand_sq(model, cfg=MCConfig(samples=64, seed=5))
        want = max(spectral_norm(h) for h in hs) ** 2
        assert est.mean == pytest.approx(want)
        assert est.std_error == 0.0

    def test_sec71_constant(self):
        model = make_example("sec71", d=3, n=5)
        est = estimate_max_summand_sq(model, cfg=MCConfig(samples=64, seed=6))
        assert est.mean == pytest.approx(0.2)
        assert est.std_error == 0.0

    def test_sec74_median_of_means(self):
        model = make_example("sec74", d=4)
        cfg = MCConfig(samples=4096, seed=7, estimator=MEDIAN_OF_MEANS)
        est = estimate_max_summand_sq(model, cfg=cfg)
        assert est.std_error is None
        assert est.spread >= 0.0
        # E max_i P_i^2 over 4 quartic-tail magnitudes sits a little above 2
        assert 2.0 <= est.mean <= 6.0


class TestThreading:
    def test_worker_count_does_not_change_output(self, monkeypatch):
        model = make_example("sec73", d=4)
        cfg = MCConfig(samples=1000, seed=8)
        monkeypatch.setenv("MATCON_THREADS", "1")
        n1, m1 = collect_samples(model, cfg)
        monkeypatch.setenv("MATCON_THREADS", "4")
        n4, m4 = collect_samples(model, cfg)
        assert np.array_equal(n1, n4)
        assert np.array_equal(m1, m4)

    def test_bad_thread_count_rejected(self, monkeypatch):
        model = make_example("sec73", d=2)
        monkeypatch.setenv("MATCON_THREADS", "0")
        with pytest.raises(ValueError):
            collect_samples(model, MCConfig(samples=10, seed=0))


class TestEmpiricalMoments:
    def test_zero_model(self):
        model = make_model([Finite(FiniteSummand([(1.0, np.zeros((2, 2)))]))])
        left, right = empirical_second_moments(model, MCConfig(samples=20, seed=0))
        assert np.all(left.array == 0.0)
        assert np.all(right.array == 0.0)

    def test_fixed_rademacher_family(self):
        rng = np.random.default_rng(10)
        hs = [rand_hermitian(rng, 2) for _ in range(3)]
        model = make_model([FixedRademacher(h) for h in hs])
        want = sum(h.array @ h.array for h in hs)
        left, right = empirical_second_moments(model, MCConfig(samples=20000, seed=11))
        scale = float(np.max(np.abs(want)))
        tol = 5.0 * scale / math.sqrt(20000)
        assert np.max(np.abs(left.array - want)) <= tol
        assert np.max(np.abs(right.array - want)) <= tol

    def test_sec73_matches_scaled_identity(self):
        d, samples = 4, 20000
        model = make_example("sec73", d=d)
        left, right = empirical_second_moments(model, MCConfig(samples=samples, seed=12))
        tol = 5.0 * math.sqrt(d / samples)
        assert np.max(np.abs(left.array - d * np.eye(d))) <= tol
        assert np.max(np.abs(right.array - d * np.eye(d))) <= tol

    def test_uncentered_rejected(self):
        model = make_model([Finite(FiniteSummand([(1.0, np.eye(2))]))])
        with pytest.raises(ValueError):
            empirical_second_moments(model, MCConfig(samples=10, seed=0))


class TestBoundReport:
    def test_sec71_sandwich(self):
        rep = bound_report(make_example("sec71", d=16, n=100), MCConfig(samples=200, seed=13))
        assert rep.sandwich_ok
        assert rep.v == pytest.approx(1.0)
        assert rep.L == pytest.approx(0.1)
        assert rep.v_provenance == "analytic"
        assert rep.L_provenance == "analytic"

    def test_isotropic_fixed_family_formulas(self):
        model = make_model([FixedRademacher(as_hermitian(basis_diag(i, 4))) for i in range(4)])
        rep = bound_report(model, MCConfig(samples=100, seed=14))
        assert rep.C == pytest.approx(28.0)
        assert rep.v == pytest.approx(1.0)
        assert rep.L == pytest.approx(1.0)
        assert rep.upper == pytest.approx(math.sqrt(28.0) + 28.0)
        assert rep.lower == pytest.approx(0.75)
        # every realization of the sum has unit norm
        assert rep.mc_sqnorm.mean == pytest.approx(1.0)
        assert rep.mc_sqnorm.std_error == 0.0
        assert rep.sandwich_ok

    def test_zero_model(self):
        model = make_model([Finite(FiniteSummand([(1.0, np.zeros((3, 3)))]))])
        rep = bound_report(model, MCConfig(samples=16, seed=15))
        assert rep.lower == 0.0 and rep.upper == 0.0
        assert rep.mc_sqnorm.mean == 0.0
        assert rep.sandwich_ok

    def test_uncentered_model_reports_mean_norm(self):
        shift = np.diag([2.0, 0.0])
        summand = FiniteSummand([(0.5, shift + np.eye(2)), (0.5, shift - np.eye(2))])
        model = make_model([Finite(summand)])
        rep = bound_report(model, MCConfig(samples=64, seed=16))
        assert rep.mean_norm == pytest.approx(2.0)
        assert rep.envelope_upper >= rep.mean_norm
        assert rep.envelope_lower >= 0.0
        # centered part is a +-I coin: v = L = 1
        assert rep.v == pytest.approx(1.0)
        assert rep.L == pytest.approx(1.0)
        assert rep.sandwich_ok

    def test_centered_model_has_no_mean_norm(self):
        rep = bound_report(make_example("sec73", d=2), MCConfig(samples=32, seed=17))
        assert rep.mean_norm is None

    def test_jensen_inequality_exact_on_shared_samples(self):
        rep = bound_report(make_example("sec73", d=5), MCConfig(samples=300, seed=18))
        assert rep.mc_norm.mean <= math.sqrt(rep.mc_sqnorm.mean) + 1e-12

    def test_sandwich_definition(self):
        rep = bound_report(make_example("sec72", d=4, n=20), MCConfig(samples=250, seed=19))
        spread = rep.mc_sqnorm.std_error
        root = math.sqrt(rep.mc_sqnorm.mean)
        want = rep.lower - rep.k * spread <= root <= rep.upper + rep.k * spread
        assert rep.sandwich_ok == want

    def test_median_of_means_report(self):
        rep = bound_report(
            make_example("sec74", d=4),
            MCConfig(samples=1024, seed=20, estimator=MEDIAN_OF_MEANS),
        )
        assert rep.L_provenance == "montecarlo"
        assert rep.mc_sqnorm.std_error is None
        assert rep.mc_sqnorm.spread >= 0.0
        assert rep.sandwich_ok


class TestOracleAgreement:
    def test_agreement_over_100_seeds(self):
        # finite-support model: exact enumeration vs the sampler, 100 fixed seeds
        rng = np.random.default_rng(21)
        hs = [rand_hermitian(rng, 2) for _ in range(3)]
        model = make_model([FixedRademacher(h) for h in hs])
        exact = brute_force_expected_norm(
            [FiniteSummand([(0.5, h.array), (0.5, -h.array)]) for h in hs], r=2
        )
        hits = 0
        for seed in range(100):
            est = estimate_norm_moment(model, r=2, cfg=MCConfig(samples=400, seed=seed))
            if abs(est.mean - exact) <= 3.0 * est.std_error:
                hits += 1
        assert hits >= 99
