import math

import numpy as np
import pytest

from conftest import random_model
from spinstar import capacities as cap
from spinstar.errors import ConfigError, DomainError
from spinstar.ensembles import (
    EnsembleConfig,
    ensemble_average,
    equal_coupling_coherence,
    low_temperature_saturation_check,
    recurrence_period,
    sample_random_model,
    sample_stream,
    short_time_flatness_check,
)
from spinstar.model import ModelSpec, coherence_factor, coherence_factor_bruteforce

GRID = tuple(np.linspace(0, 5, 101))


class TestSampling:
    def test_deterministic(self):
        a = sample_random_model(6, 1.0, 1.0, sample_stream(42, 3))
        b = sample_random_model(6, 1.0, 1.0, sample_stream(42, 3))
        assert a == b
        assert a != sample_random_model(6, 1.0, 1.0, sample_stream(42, 4))

    def test_uniform_moments(self):
        m = sample_random_model(100_000, 1.0, 1.0, sample_stream(7, 0))
        # 3 sigma of the sample mean of U(-1, 1)
        assert abs(np.mean(m.g)) <= 3 * (1 / math.sqrt(3)) / math.sqrt(1e5)
        assert abs(np.mean(m.omega)) <= 0.01
        assert np.all(np.abs(m.g) <= 1) and np.all(np.abs(m.omega) <= 1)


class TestEnsembleAverage:
    def test_config_validation(self):
        with pytest.raises(ConfigError):
            EnsembleConfig(4, 0, 1, 1.0, 1.0, GRID)
        with pytest.raises(ConfigError):
            EnsembleConfig(4, 2, 1, 1.0, 1.0, (0.0, 2.0, 1.0))

    def test_single_sample_is_model_curve(self):
        cfg = EnsembleConfig(5, 1, 11, 1.0, 1.0, GRID)
        res = ensemble_average(cfg)
        m = cfg.model(0)
        expected = [cap.quantum_capacity(m, t) for t in GRID]
        assert np.allclose(res.mean_q, expected, atol=1e-15)

    def test_noiseless_start(self):
        res = ensemble_average(EnsembleConfig(10, 20, 5, 1.0, 1.0, GRID))
        assert res.mean_q[0] == 1.0
        assert res.mean_ce[0] == 2.0
        assert res.mean_qe[0] == 1.0

    def test_mean_within_sample_envelope(self):
        res = ensemble_average(EnsembleConfig(4, 12, 3, 1.0, 1.0, GRID), keep_samples=True)
        assert np.all(res.mean_q >= res.per_sample_q.min(axis=0) - 1e-15)
        assert np.all(res.mean_q <= res.per_sample_q.max(axis=0) + 1e-15)

    @pytest.mark.parametrize("workers", [2, 8])
    def test_worker_count_does_not_change_result(self, workers):
        cfg = EnsembleConfig(12, 16, 99, 1.0, 1.0, GRID)
        serial = ensemble_average(cfg, thetas=[0.3])
        parallel = ensemble_average(cfg, workers=workers, thetas=[0.3])
        assert np.array_equal(serial.mean_q, parallel.mean_q)
        assert np.array_equal(serial.mean_ce_lim[0.3], parallel.mean_ce_lim[0.3])

    def test_large_bath_decays(self):
        grid = np.linspace(1, 5, 81)
        res = ensemble_average(EnsembleConfig(100, 50, 42, 1.0, 1.0, tuple(grid)))
        assert res.mean_q.max() < 0.05

    @pytest.mark.parametrize("n", [4, 100])
    def test_colder_bath_is_better(self, n):
        low = ensemble_average(EnsembleConfig(n, 50, 42, 10.0, 1.0, GRID))
        high = ensemble_average(EnsembleConfig(n, 50, 42, 1.0, 1.0, GRID))
        assert np.all(low.mean_q >= high.mean_q)


class TestEqualCoupling:
    def test_time_zero(self):
        cf = equal_coupling_coherence(7, 0.8, 0.6, 1.0, 2.0, 0.0)
        assert cf.ratio_abs == 1.0
        assert cf.log_abs_pi == pytest.approx(7 * math.log(2 * math.cosh(0.6)), rel=1e-15)

    def test_high_temperature(self, rng):
        for t in rng.uniform(0, 3, 10):
            cf = equal_coupling_coherence(5, 0.7, 0.9, 1.0, 0.0, t)
            assert cf.ratio_abs == pytest.approx(abs(math.cos(2 * t * 0.7)) ** 5, abs=1e-14)

    def test_against_enumeration(self):
        m = ModelSpec.equal(4, 1.0, 1.0, beta=1.0)
        closed = equal_coupling_coherence(4, 1.0, 1.0, 1.0, 1.0, 0.3)
        brute = coherence_factor_bruteforce(m, 0.3)
        assert abs(closed.pi_n - brute.pi_n) <= 1e-12 * abs(brute.pi_n)

    @pytest.mark.parametrize("n", [1, 3, 8, 16])
    def test_three_paths_agree(self, rng, n):
        g, om, beta = rng.uniform(-1, 1), rng.uniform(-1, 1), float(rng.choice([0.0, 1.0, 10.0]))
        m = ModelSpec.equal(n, g, om, alpha=1.3, beta=beta)
        for t in rng.uniform(0, 3, 5):
            closed = equal_coupling_coherence(n, g, om, 1.3, beta, t)
            for other in (coherence_factor(m, t), coherence_factor_bruteforce(m, t)):
                assert abs(closed.normalized - other.normalized) <= 1e-12 * closed.ratio_abs

    def test_period(self):
        assert recurrence_period(1.0, 1.0) == pytest.approx(math.pi / 2)
        assert recurrence_period(0.5, 2.0) == pytest.approx(math.pi / 2)
        with pytest.raises(DomainError):
            recurrence_period(0.0, 1.0)

    def test_periodic_capacity(self):
        m = ModelSpec.equal(6, 0.7, 0.4, alpha=1.5, beta=1.0)
        period = recurrence_period(0.7, 1.5)
        for t in np.linspace(0, 2 * period, 100):
            a = cap.capacity_point(m, t, [0.4])
            b = cap.capacity_point(m, t + period, [0.4])
            assert abs(a.q - b.q) <= 1e-10
            assert abs(a.c_e_lim[0][1] - b.c_e_lim[0][1]) <= 1e-10

    def test_infinite_temperature_zero(self):
        m = ModelSpec.equal(4, 1.0, 1.0, beta=0.0)
        assert cap.quantum_capacity(m, math.pi / 4) == 0.0
        assert cap.quantum_capacity(m, 3 * math.pi / 4) == 0.0


class TestLimits:
    def test_low_temperature_saturation(self):
        grid = np.linspace(0, math.pi / 2, 201)
        assert low_temperature_saturation_check(4, 1.0, 1.0, 1.0, 50.0, grid) >= 0.999

    def test_infinite_temperature_minimum(self):
        grid = np.linspace(0, math.pi / 2, 201)
        assert low_temperature_saturation_check(4, 1.0, 1.0, 1.0, 0.0, grid) == 0.0

    def test_short_time(self, rng):
        m = random_model(rng, 4)
        (e0, d0), (e1, d1), (e2, d2) = short_time_flatness_check(m, [0.0, 1e-3, 2e-3])
        assert d0 == 0.0
        assert d1 < 1e-4
        assert d1 / d2 < 0.5
