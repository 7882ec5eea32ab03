import numpy as np
import pytest

from defectwalk.classical import RWSpec, rw_distribution
from defectwalk.core import (
    CoinAngle,
    ConsistencyError,
    DefectSpec,
    ValidationError,
    WalkConfig,
    make_initial,
    named_state,
)
from defectwalk.emulate import (
    DensityState,
    EmulationConfig,
    density_step,
    estimate_with_errors,
    evolve_with_visibility,
    rng_for,
    sample_counts,
)
from defectwalk.walk import Distribution, evolve, tv_distance, variance


def walk_cfg(steps=6, theta=22.5, phi=180.0, site=0, init="antisym"):
    defect = None if phi is None else DefectSpec(site, phi)
    return WalkConfig(
        steps=steps, coin=CoinAngle(theta), defect=defect,
        initial_coin=named_state(init),
    )


class TestConfig:
    def test_visibility_domain(self):
        with pytest.raises(ValidationError):
            EmulationConfig(walk=walk_cfg(), visibility=1.5)
        with pytest.raises(ValidationError):
            EmulationConfig(walk=walk_cfg(), visibility=-0.1)

    def test_counts_and_reps_domains(self):
        with pytest.raises(ValidationError):
            EmulationConfig(walk=walk_cfg(), counts_per_step=0)
        with pytest.raises(ValidationError):
            EmulationConfig(walk=walk_cfg(), mc_reps=0)


class TestDensityEvolution:
    def test_pure_round_trip(self):
        s = make_initial(0, named_state("antisym"))
        rho = DensityState.from_pure(s)
        assert rho.trace() == pytest.approx(1.0, abs=1e-15)
        d = rho.position_distribution()
        assert d.prob_at(0) == pytest.approx(1.0)

    def test_full_visibility_matches_pure_engine(self):
        for theta, phi, init in [(22.5, 180.0, "antisym"), (30.0, 90.0, "minus"), (22.5, None, "h")]:
            cfg = walk_cfg(steps=6, theta=theta, phi=phi, init=init)
            dists = evolve_with_visibility(EmulationConfig(walk=cfg, visibility=1.0))
            pure = evolve(cfg).distributions
            for a, b in zip(dists, pure):
                assert a.offset == b.offset
                assert np.abs(a.probs - b.probs).max() < 1e-12

    def test_zero_visibility_is_classical_diffusion(self):
        cfg = walk_cfg(steps=10, phi=None)
        dists = evolve_with_visibility(EmulationConfig(walk=cfg, visibility=0.0))
        for t, d in enumerate(dists):
            assert variance(d) == pytest.approx(float(t), abs=1e-8)
        ref = rw_distribution(RWSpec(10))
        assert tv_distance(dists[-1], ref) < 1e-10

    def test_channel_preserves_trace_hermiticity_positivity(self):
        for v in (0.0, 0.3, 0.998):
            state = DensityState.from_pure(make_initial(0, named_state("antisym")))
            coin = CoinAngle(22.5)
            defect = DefectSpec(0, 135.0)
            for _ in range(8):
                state = density_step(state, coin, defect, v)
                assert abs(state.trace() - 1.0) < 1e-12
                m = state.matrix()
                assert np.abs(m - m.conj().T).max() < 1e-12
                assert np.linalg.eigvalsh(m).min() > -1e-10

    def test_partial_dephasing_sits_between_extremes(self):
        cfg = walk_cfg(steps=10, phi=None)
        pure_var = evolve(cfg).final_variance
        mid = evolve_with_visibility(EmulationConfig(walk=cfg, visibility=0.9))
        assert 10.0 < variance(mid[-1]) < pure_var

    def test_check_flags_doctored_states(self):
        rho = DensityState.from_pure(make_initial(0, named_state("h")))
        rho.rho = rho.rho * 1.1
        with pytest.raises(ConsistencyError):
            rho.check()
        bad = DensityState.from_pure(make_initial(0, named_state("h")))
        bad.rho = bad.rho.copy()
        bad.rho[0, 0, 0, 1] = 1.0
        with pytest.raises(ConsistencyError):
            bad.check()


class TestSampling:
    def test_point_mass(self):
        d = Distribution(3, np.array([1.0]))
        c = sample_counts(d, 100, rng_for(0, 0, 0))
        assert list(c) == [100]

    def test_counts_sum(self):
        d = Distribution(0, np.array([0.25, 0.5, 0.25]))
        c = sample_counts(d, 1234, rng_for(9, 1, 2))
        assert c.sum() == 1234

    def test_seed_reproducibility(self):
        d = Distribution(0, np.array([0.25, 0.5, 0.25]))
        a = sample_counts(d, 10_000, rng_for(7, 3, 1))
        b = sample_counts(d, 10_000, rng_for(7, 3, 1))
        assert np.array_equal(a, b)
        c = sample_counts(d, 10_000, rng_for(7, 1, 3))
        assert not np.array_equal(a, c)

    def test_large_n_concentration(self):
        d = Distribution(0, np.array([0.5, 0.5]))
        n = 200_000
        c = sample_counts(d, n, rng_for(11, 0, 0))
        assert abs(c[0] / n - 0.5) < 5.0 / np.sqrt(n)

    def test_integer_seed_accepted(self):
        d = Distribution(0, np.array([0.5, 0.5]))
        a = sample_counts(d, 50, 123)
        b = sample_counts(d, 50, 123)
        assert np.array_equal(a, b)

    def test_negative_roundoff_clipped(self):
        d = Distribution(0, np.array([0.5, -1e-17, 0.5]))
        c = sample_counts(d, 1000, rng_for(2, 0, 0))
        assert c[1] == 0 and c.sum() == 1000

    def test_at_least_one_count(self):
        d = Distribution(0, np.array([1.0]))
        with pytest.raises(ValidationError):
            sample_counts(d, 0, rng_for(0, 0, 0))


class TestEstimates:
    def test_deterministic_given_config(self):
        cfg = EmulationConfig(walk=walk_cfg(steps=5), counts_per_step=2000, mc_reps=8, rng_seed=21)
        a = estimate_with_errors(cfg)
        b = estimate_with_errors(cfg)
        for sa, sb in zip(a.steps, b.steps):
            assert np.array_equal(sa.counts, sb.counts)
            assert np.array_equal(sa.p_mean, sb.p_mean)
        assert np.array_equal(a.var_mean, b.var_mean)
        assert np.array_equal(a.var_std, b.var_std)

    def test_counts_sum_per_step(self):
        cfg = EmulationConfig(walk=walk_cfg(steps=4), counts_per_step=777, mc_reps=3, rng_seed=1)
        t = estimate_with_errors(cfg)
        for s in t.steps:
            assert s.counts.sum() == 777

    def test_single_rep_reports_no_std(self):
        cfg = EmulationConfig(walk=walk_cfg(steps=3), counts_per_step=500, mc_reps=1, rng_seed=5)
        t = estimate_with_errors(cfg)
        assert not t.std_available
        assert t.var_std is None and t.rec_std is None
        for s in t.steps:
            assert s.p_std is None and s.var_std is None and s.rec_std is None

    def test_large_n_recovers_exact_values(self):
        cfg = EmulationConfig(
            walk=walk_cfg(steps=4), counts_per_step=100_000_000, mc_reps=2,
            visibility=1.0, rng_seed=3,
        )
        t = estimate_with_errors(cfg)
        exact = evolve(walk_cfg(steps=4))
        assert t.var_mean[-1] == pytest.approx(exact.final_variance, abs=1e-3)
        assert t.rec_mean[-1] == pytest.approx(exact.final_recurrence, abs=1e-3)

    def test_rep_draws_match_isolated_streams(self):
        # the (seed, step, rep) stream contract: any repetition can be
        # reproduced on its own, so evaluation order cannot matter
        cfg = EmulationConfig(walk=walk_cfg(steps=2), counts_per_step=400, mc_reps=4, rng_seed=13)
        t = estimate_with_errors(cfg)
        dists = evolve_with_visibility(cfg)
        for s in t.steps:
            lone = sample_counts(dists[s.step], 400, rng_for(13, s.step, 0))
            assert np.array_equal(s.counts, lone)

    def test_sampled_distribution_close_to_exact(self):
        cfg = EmulationConfig(walk=walk_cfg(steps=10), mc_reps=1, rng_seed=17)
        t = estimate_with_errors(cfg)
        exact = evolve(walk_cfg(steps=10)).final_distribution
        sampled = Distribution(t.steps[-1].offset, t.steps[-1].p_mean)
        assert tv_distance(sampled, exact) < 0.05
