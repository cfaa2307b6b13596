import math

import numpy as np
import pytest
from scipy import stats

from netepi.graph import Network, generate_ba
from netepi.inference import (
    Phi,
    PriorSpec,
    SabcConfig,
    estimate_kernel_scale,
    kernel_continuous,
    kernel_node,
    kernel_node_prob,
    prior_sample,
    sabc_run,
)

from .oracles import rejection_abc
from .toy import ba_simple_problem, star_problem


def rng(seed=0):
    return np.random.default_rng(seed)


class TestPhiAndPrior:
    def test_phi_validation(self):
        with pytest.raises(ValueError):
            Phi(params=(1.2,), seed_node=0)
        with pytest.raises(ValueError):
            Phi(params=(), seed_node=0)
        with pytest.raises(ValueError):
            Phi(params=(0.5,), seed_node=-1)

    def test_empty_support_rejected(self):
        with pytest.raises(ValueError):
            PriorSpec(seed_support=(), dim=1)

    def test_singleton_support_always_returns_it(self):
        spec = PriorSpec(seed_support=(5,), dim=1)
        r = rng(0)
        assert all(prior_sample(spec, r).seed_node == 5 for _ in range(100))

    def test_support_frequencies_uniform(self):
        spec = PriorSpec(seed_support=(1, 2, 3, 4), dim=1)
        r = rng(1)
        draws = np.array([prior_sample(spec, r).seed_node for _ in range(100_000)])
        sigma = math.sqrt(0.25 * 0.75 / len(draws))
        for node in (1, 2, 3, 4):
            assert abs((draws == node).mean() - 0.25) <= 3 * sigma

    def test_continuous_mean_is_half(self):
        spec = PriorSpec(seed_support=(0,), dim=1)
        r = rng(2)
        thetas = np.array([prior_sample(spec, r).params[0] for _ in range(100_000)])
        sigma = math.sqrt(1 / 12 / len(thetas))
        assert abs(thetas.mean() - 0.5) <= 3 * sigma


class TestNodeKernel:
    def graph_with_degrees_1_1_2(self):
        # node 0's neighbors: 1 (deg 1), 2 (deg 1), 3 (deg 2)
        return Network.from_edges(5, [(0, 1), (0, 2), (0, 3), (3, 4)])

    def test_inverse_degree_weights(self):
        net = self.graph_with_degrees_1_1_2()
        exact = {1: 0.4, 2: 0.4, 3: 0.2}
        for dst, p in exact.items():
            assert kernel_node_prob(0, dst, net) == pytest.approx(p, rel=1e-12)

    def test_single_neighbor_is_certain(self):
        net = Network.from_edges(2, [(0, 1)])
        assert kernel_node_prob(0, 1, net) == 1.0
        assert kernel_node(0, net, rng(0)) == 1

    def test_empirical_frequencies_match_exact_weights(self):
        # fixed 6-node graph, 1e5 draws
        net = Network.from_edges(6, [(0, 1), (0, 2), (0, 3), (3, 4), (3, 5), (1, 2)])
        r = rng(3)
        draws = np.array([kernel_node(0, net, r) for _ in range(100_000)])
        for dst in net.neighbors(0):
            p = kernel_node_prob(0, dst, net)
            sigma = math.sqrt(p * (1 - p) / len(draws))
            assert abs((draws == dst).mean() - p) <= 3 * sigma

    def test_isolated_node_cannot_be_perturbed(self):
        net = Network.from_edges(3, [(1, 2)])
        with pytest.raises(ValueError):
            kernel_node(0, net, rng(0))

    def test_normalization_on_every_node_of_test_networks(self):
        for seed in range(3):
            net = generate_ba(40, 3, rng(seed))
            for node in range(net.node_count):
                total = sum(kernel_node_prob(node, dst, net) for dst in net.neighbors(node))
                assert abs(total - 1.0) <= 1e-12

    def test_off_neighbor_probability_is_zero(self):
        net = self.graph_with_degrees_1_1_2()
        assert kernel_node_prob(0, 4, net) == 0.0


class TestContinuousKernel:
    def test_degenerate_scale_returns_input(self):
        out = kernel_continuous((0.37,), 1e-12, rng(4))
        assert out is not None
        assert abs(out[0] - 0.37) < 1e-5

    def test_truncated_mean_at_center(self):
        r = rng(5)
        draws = np.array([kernel_continuous((0.5,), 0.1, r)[0] for _ in range(100_000)])
        assert ((draws >= 0) & (draws <= 1)).all()
        assert abs(draws.mean() - 0.5) <= 3 * draws.std() / math.sqrt(len(draws))

    def test_diagonal_covariance_factorizes(self):
        r = rng(6)
        cov = np.diag([0.04, 0.09])
        joint = np.array([kernel_continuous((0.4, 0.6), cov, r) for _ in range(20_000)])
        r1 = rng(7)
        m1 = np.array([kernel_continuous((0.4,), 0.04, r1)[0] for _ in range(20_000)])
        r2 = rng(8)
        m2 = np.array([kernel_continuous((0.6,), 0.09, r2)[0] for _ in range(20_000)])
        assert stats.ks_2samp(joint[:, 0], m1).pvalue > 0.001
        assert stats.ks_2samp(joint[:, 1], m2).pvalue > 0.001

    def test_exhausted_redraws_return_none(self):
        # center far outside reachability: every draw escapes the box
        out = kernel_continuous((1.0,), 1e4, rng(9), max_tries=5)
        assert out is None or (0 <= out[0] <= 1)

    def test_invalid_scale_rejected(self):
        with pytest.raises(ValueError):
            kernel_continuous((0.5,), -1.0, rng(0))


class TestKernelScale:
    def test_two_point_sample_variance(self):
        phis = [Phi((0.2,), 0), Phi((0.4,), 0)]
        assert estimate_kernel_scale(phis) == pytest.approx(0.02, rel=1e-12)

    def test_constant_population_floored(self):
        phis = [Phi((0.3,), 0)] * 10
        assert estimate_kernel_scale(phis) == pytest.approx(1e-8)

    def test_matches_textbook_formula(self):
        r = rng(10)
        values = r.random(1000)
        phis = [Phi((float(v),), 0) for v in values]
        mean = values.sum() / 1000
        manual = ((values - mean) ** 2).sum() / 999
        assert estimate_kernel_scale(phis) == pytest.approx(manual, rel=1e-12)

    def test_two_dimensional_covariance(self):
        r = rng(11)
        values = r.random((500, 2))
        phis = [Phi((float(a), float(b)), 0) for a, b in values]
        cov = estimate_kernel_scale(phis)
        manual = np.cov(values.T, ddof=1)
        assert np.allclose(cov, manual, rtol=1e-12)


class TestSabcRun:
    def test_zero_steps_returns_prior_population(self):
        problem, spec, _ = star_problem()
        cfg = SabcConfig(population_size=50, max_steps=0, rng_seed=42)
        sample = sabc_run(problem, spec, cfg)
        assert sample.steps_run == 0
        assert len(sample.phis) == 50
        assert len(sample.tolerances) == 1
        assert sample.tolerances[0] == pytest.approx(float(np.median(sample.distances)))
        assert sample.acceptance_rates == ()

    def test_deterministic_for_fixed_seed(self):
        problem, spec, _ = star_problem()
        cfg = SabcConfig(population_size=40, max_steps=8, rng_seed=7)
        a = sabc_run(problem, spec, cfg)
        b = sabc_run(problem, spec, cfg)
        assert a.phis == b.phis
        assert a.tolerances == b.tolerances
        assert a.acceptance_rates == b.acceptance_rates

    def test_tolerance_never_increases(self):
        problem, spec, _ = star_problem()
        cfg = SabcConfig(population_size=40, max_steps=15, rng_seed=3)
        sample = sabc_run(problem, spec, cfg)
        diffs = np.diff(sample.tolerances)
        assert (diffs <= 0).all()
        assert np.isfinite(sample.acceptance_rates).all()

    def test_population_stays_in_prior_support(self):
        problem, spec, _ = ba_simple_problem(t_end=40)
        cfg = SabcConfig(population_size=60, max_steps=10, rng_seed=5)
        sample = sabc_run(problem, spec, cfg)
        support = set(spec.seed_support)
        for phi in sample.phis:
            assert phi.seed_node in support
            assert 0.0 <= phi.params[0] <= 1.0

    def test_posterior_concentrates_below_prior_variance(self):
        problem, spec, _ = star_problem()
        cfg = SabcConfig(population_size=100, max_steps=30, rng_seed=11)
        sample = sabc_run(problem, spec, cfg)
        assert sample.params_array[:, 0].var() < 1 / 12

    def test_light_agreement_with_rejection_oracle(self):
        problem, spec, _ = star_problem()
        cfg = SabcConfig(population_size=100, max_steps=30, rng_seed=13)
        sample = sabc_run(problem, spec, cfg)
        oracle = rejection_abc(problem, spec, n_sims=30_000, accept_fraction=0.005, seed=17)
        oracle_mean = np.mean([p.params[0] for p in oracle])
        assert abs(sample.params_array[:, 0].mean() - oracle_mean) < 0.08

    def test_resampling_fires_and_stays_deterministic(self):
        problem, spec, _ = star_problem()
        cfg = SabcConfig(
            population_size=30, max_steps=6, rng_seed=19, resample_threshold=10
        )
        a = sabc_run(problem, spec, cfg)
        b = sabc_run(problem, spec, cfg)
        assert a.resample_steps == b.resample_steps
        assert len(a.resample_steps) >= 1
        assert a.phis == b.phis

    def test_acceptance_cutoff_stops_early(self):
        problem, spec, _ = star_problem()
        cfg = SabcConfig(
            population_size=30, max_steps=60, rng_seed=23, acceptance_rate_cutoff=0.999
        )
        sample = sabc_run(problem, spec, cfg)
        # rates below 0.999 for ten consecutive steps end the run
        assert sample.steps_run <= 12

    def test_dimension_mismatch_rejected(self):
        problem, _, _ = star_problem()
        bad = PriorSpec(seed_support=(0,), dim=2)
        with pytest.raises(ValueError):
            sabc_run(problem, bad, SabcConfig(population_size=10, max_steps=1))
