import numpy as np
import pytest

import choqfuse.optimize as opt
from choqfuse import (DEConfig, binomial_crossover, differential_evolution,
                      draw_parent_indices, init_population, mutant_vector,
                      select_trial)
from choqfuse.errors import NonFiniteFitnessError


def sphere(x):
    return float(np.dot(x, x))


def make_config(**overrides):
    base = dict(dimension=3, lower_bound=-5.0, upper_bound=5.0,
                population_size=15, scale_factor=0.5, crossover_rate=0.9,
                max_generations=100, seed=0)
    base.update(overrides)
    return DEConfig(**base)


class TestConfigValidation:
    def test_scalar_bounds_broadcast(self):
        cfg = make_config()
        np.testing.assert_array_equal(cfg.lower_bound, [-5.0, -5.0, -5.0])
        np.testing.assert_array_equal(cfg.upper_bound, [5.0, 5.0, 5.0])

    @pytest.mark.parametrize("overrides", [
        dict(population_size=3),
        dict(lower_bound=1.0, upper_bound=1.0),
        dict(lower_bound=[0.0, 0.0, 2.0], upper_bound=1.0),
        dict(scale_factor=1.5),
        dict(crossover_rate=-0.1),
        dict(max_generations=0),
        dict(dimension=0),
        dict(lower_bound=[0.0, 0.0], upper_bound=[1.0, 1.0]),
    ])
    def test_bad_configs_rejected(self, overrides):
        with pytest.raises(ValueError):
            make_config(**overrides)


class TestInitPopulation:
    def test_shape_and_bounds(self):
        cfg = make_config(lower_bound=0.0, upper_bound=1.0)
        pop = init_population(cfg, np.random.default_rng(0))
        assert pop.shape == (15, 3)
        assert np.all(pop >= 0.0) and np.all(pop <= 1.0)

    def test_same_seed_same_population(self):
        cfg = make_config()
        a = init_population(cfg, np.random.default_rng(42))
        b = init_population(cfg, np.random.default_rng(42))
        assert np.array_equal(a, b)


class TestParentIndices:
    def test_constraints_and_coverage(self):
        rng = np.random.default_rng(1)
        best = 2
        seen = set()
        for _ in range(20000):
            r1, r2 = draw_parent_indices(rng, 5, best)
            assert r1 != r2
            assert r1 != best and r2 != best
            assert 0 <= r1 < 5 and 0 <= r2 < 5
            seen.add((r1, r2))
        # all 4 * 3 ordered pairs over {0, 1, 3, 4} show up
        assert len(seen) == 12


class TestMutation:
    def test_difference_arithmetic(self):
        best = np.array([0.5, 0.5, 0.5])
        r1 = np.array([0.6, 0.4, 0.5])
        r2 = np.array([0.4, 0.6, 0.5])
        out = mutant_vector(best, r1, r2, 0.5, np.zeros(3), np.ones(3))
        np.testing.assert_allclose(out, [0.6, 0.4, 0.5], atol=1e-15)

    def test_zero_scale_returns_best(self):
        best = np.array([0.2, 0.9])
        out = mutant_vector(best, np.array([0.5, 0.1]), np.array([0.7, 0.3]),
                            0.0, np.zeros(2), np.ones(2))
        np.testing.assert_array_equal(out, best)

    def test_clipping_into_the_box(self):
        out = mutant_vector(np.array([0.9]), np.array([0.9]), np.array([0.1]),
                            0.5, np.zeros(1), np.ones(1))
        assert out[0] == 1.0


class TestCrossover:
    def test_full_rate_copies_the_mutant(self):
        rng = np.random.default_rng(0)
        target = np.zeros(6)
        mutant = np.ones(6)
        np.testing.assert_array_equal(
            binomial_crossover(target, mutant, 1.0, rng), mutant)

    def test_zero_rate_flips_exactly_one_coordinate(self):
        rng = np.random.default_rng(0)
        target = np.zeros(6)
        mutant = np.ones(6)
        for _ in range(50):
            trial = binomial_crossover(target, mutant, 0.0, rng)
            assert trial.sum() == 1.0

    def test_single_dimension_always_crosses(self):
        rng = np.random.default_rng(0)
        trial = binomial_crossover(np.array([0.0]), np.array([1.0]), 0.0, rng)
        assert trial[0] == 1.0


class TestSelection:
    def test_better_trial_wins(self):
        assert select_trial(0.5, 0.3)

    def test_worse_trial_loses(self):
        assert not select_trial(0.3, 0.5)

    def test_tie_promotes_the_trial(self):
        assert select_trial(0.4, 0.4)

    @pytest.mark.parametrize("pair", [(float("nan"), 0.1), (0.1, float("inf"))])
    def test_non_finite_fitness_rejected(self, pair):
        with pytest.raises(NonFiniteFitnessError):
            select_trial(*pair)


class TestDifferentialEvolution:
    def test_sphere_converges(self):
        result = differential_evolution(sphere, make_config(seed=1))
        assert result.fun <= 1e-3
        np.testing.assert_allclose(result.x, 0.0, atol=0.1)

    def test_history_shape_and_monotonicity(self):
        result = differential_evolution(sphere, make_config(max_generations=40))
        assert len(result.history) == 41
        assert result.history.best_vector.shape == (41, 3)
        assert np.all(np.diff(result.history.best_fitness) <= 0)
        assert result.history.best_fitness[-1] == result.fun

    def test_constant_objective_keeps_flat_history(self):
        result = differential_evolution(lambda x: 3.25,
                                        make_config(max_generations=10))
        assert result.fun == 3.25
        assert np.all(result.history.best_fitness == 3.25)

    def test_fixed_seed_reproduces_the_full_history(self):
        a = differential_evolution(sphere, make_config(seed=9, max_generations=30))
        b = differential_evolution(sphere, make_config(seed=9, max_generations=30))
        assert np.array_equal(a.history.best_fitness, b.history.best_fitness)
        assert np.array_equal(a.history.best_vector, b.history.best_vector)
        assert np.array_equal(a.x, b.x)

    def test_every_evaluated_candidate_stays_in_the_box(self):
        seen = []

        def recording(x):
            seen.append(x)
            return sphere(x)

        differential_evolution(recording,
                               make_config(max_generations=20, seed=4))
        assert len(seen) == 15 * 21
        for x in seen:
            assert np.all(x >= -5.0) and np.all(x <= 5.0)

    def test_parent_constraints_hold_through_a_run(self, monkeypatch):
        recorded = []
        original = opt.draw_parent_indices

        def recording(rng, population_size, best_index):
            pair = original(rng, population_size, best_index)
            recorded.append((*pair, best_index))
            return pair

        monkeypatch.setattr(opt, "draw_parent_indices", recording)
        differential_evolution(
            sphere, make_config(population_size=6, max_generations=25, seed=2))
        assert len(recorded) == 6 * 25
        for r1, r2, best in recorded:
            assert r1 != r2 and r1 != best and r2 != best

    def test_non_finite_objective_raises(self):
        def broken(x):
            return float("nan")

        with pytest.raises(NonFiniteFitnessError):
            differential_evolution(broken, make_config(max_generations=1))
