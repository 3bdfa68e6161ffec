import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from choqfuse import (ChoquetEnsembleClassifier, DEConfig, FittedEnsemble,
                      LinearHead, SugenoMeasure, clip_densities, cross_entropy,
                      ensemble_forward, fit_densities, softmax)
from choqfuse.errors import ShapeMismatchError


def informative_fixture(n_samples=120, n_features=4, n_classes=3, seed=0):
    """Criterion 1 carries the labels; criteria 0 and 2 are pure noise."""
    rng = np.random.default_rng(seed)
    y = rng.integers(0, n_classes, n_samples)
    weights = np.zeros((n_features, n_classes))
    weights[:n_classes, :n_classes] = np.eye(n_classes) * 4.0
    head = LinearHead(weights=weights, bias=np.zeros(n_classes))
    signal = rng.uniform(0.0, 0.3, (n_samples, n_features))
    signal[np.arange(n_samples), y] += 2.0
    noise_a = rng.uniform(0.0, 2.5, (n_samples, n_features))
    noise_b = rng.uniform(0.0, 2.5, (n_samples, n_features))
    return [noise_a, signal, noise_b], y, head


class TestSoftmax:
    def test_symmetry(self):
        np.testing.assert_allclose(softmax([0.0, 0.0]), [0.5, 0.5], atol=1e-15)

    def test_large_logits_do_not_overflow(self):
        out = softmax([1000.0, 0.0])
        assert np.all(np.isfinite(out))
        assert out[0] == pytest.approx(1.0, abs=1e-12)
        assert out[1] == pytest.approx(0.0, abs=1e-12)

    def test_log_ratios(self):
        out = softmax([math.log(1), math.log(2), math.log(3)])
        np.testing.assert_allclose(out, [1 / 6, 2 / 6, 3 / 6], atol=1e-12)

    def test_rows_sum_to_one(self):
        rng = np.random.default_rng(0)
        out = softmax(rng.normal(0, 10, (50, 4)), axis=1)
        np.testing.assert_allclose(out.sum(axis=1), 1.0, atol=1e-12)
        assert np.all(out > 0)


class TestCrossEntropy:
    def test_perfect_prediction_is_zero(self):
        p = np.array([[1.0, 0.0], [0.0, 1.0]])
        assert cross_entropy(p, [0, 1]) == 0.0

    def test_uniform_binary_prediction(self):
        p = np.full((4, 2), 0.5)
        assert cross_entropy(p, [0, 1, 0, 1]) == pytest.approx(math.log(2), abs=1e-12)

    def test_zero_probability_stays_finite(self):
        p = np.array([[0.0, 1.0]])
        loss = cross_entropy(p, [0])
        assert loss == pytest.approx(-math.log(1e-12), abs=1e-9)
        assert np.isfinite(loss)

    def test_label_length_checked(self):
        with pytest.raises(ShapeMismatchError):
            cross_entropy(np.full((3, 2), 0.5), [0, 1])

    def test_label_range_checked(self):
        with pytest.raises(IndexError):
            cross_entropy(np.full((2, 2), 0.5), [0, 2])


class TestLinearHead:
    def test_shape_properties(self):
        head = LinearHead(weights=np.zeros((4, 3)), bias=np.zeros(3))
        assert head.n_features == 4
        assert head.n_classes == 3

    def test_bias_length_must_match(self):
        with pytest.raises(ShapeMismatchError):
            LinearHead(weights=np.zeros((4, 3)), bias=np.zeros(2))

    def test_at_least_two_classes(self):
        with pytest.raises(ValueError):
            LinearHead(weights=np.zeros((4, 1)), bias=np.zeros(1))

    def test_finite_entries_required(self):
        with pytest.raises(ValueError):
            LinearHead(weights=np.array([[np.inf, 0.0]]), bias=np.zeros(2))


class TestEnsembleForward:
    def test_single_criterion_reduces_to_plain_softmax(self):
        rng = np.random.default_rng(1)
        features = rng.normal(0, 2, (6, 3))
        head = LinearHead(weights=np.eye(3), bias=np.zeros(3))
        probs = ensemble_forward([features], SugenoMeasure([1.0]), head)
        np.testing.assert_allclose(probs, softmax(features, axis=1), atol=1e-15)

    def test_identical_criteria_match_the_single_model(self):
        rng = np.random.default_rng(2)
        features = rng.normal(0, 1, (8, 4))
        head = LinearHead(weights=rng.normal(0, 1, (4, 3)), bias=rng.normal(0, 1, 3))
        measure = SugenoMeasure([0.3, 0.6, 0.2])
        fused = ensemble_forward([features] * 3, measure, head)
        single = softmax(features @ head.weights + head.bias, axis=1)
        np.testing.assert_allclose(fused, single, atol=1e-12)
        y = rng.integers(0, 3, 8)
        assert cross_entropy(fused, y) == pytest.approx(
            cross_entropy(single, y), abs=1e-12)

    def test_two_criterion_hand_case(self):
        head = LinearHead(weights=np.eye(2), bias=np.zeros(2))
        measure = SugenoMeasure([0.5, 0.5])
        assert measure.lambda_ == 0.0
        probs = ensemble_forward(
            [np.array([[1.0, 0.0]]), np.array([[0.0, 1.0]])], measure, head)
        np.testing.assert_allclose(probs, [[0.5, 0.5]], atol=1e-12)

    def test_rows_are_positive_and_normalized(self):
        rng = np.random.default_rng(3)
        evidence = rng.uniform(-5, 5, (3, 20, 4))
        head = LinearHead(weights=rng.normal(0, 1, (4, 3)), bias=np.zeros(3))
        probs = ensemble_forward(evidence, SugenoMeasure([0.2, 0.5, 0.4]), head)
        np.testing.assert_allclose(probs.sum(axis=1), 1.0, atol=1e-9)
        assert np.all(probs > 0)

    def test_feature_count_must_match_head(self):
        head = LinearHead(weights=np.zeros((3, 2)), bias=np.zeros(2))
        with pytest.raises(ShapeMismatchError):
            ensemble_forward([np.ones((2, 4))], SugenoMeasure([1.0]), head)


class TestClipDensities:
    def test_interior_candidates_untouched(self):
        inside = np.array([1e-6, 0.5, 1.0 - 1e-6])
        np.testing.assert_array_equal(clip_densities(inside), inside)

    def test_boundary_candidates_pulled_inside(self):
        out = clip_densities(np.array([-0.2, 0.0, 1.0, 1.3]))
        np.testing.assert_array_equal(out, [1e-6, 1e-6, 1 - 1e-6, 1 - 1e-6])


class TestFitDensities:
    def test_beats_the_equal_density_baseline(self):
        evidence, y, head = informative_fixture()
        config = DEConfig(dimension=3, lower_bound=0.0, upper_bound=1.0,
                          population_size=10, max_generations=25, seed=5)
        fitted = fit_densities(evidence, y, head, config)
        baseline_measure = SugenoMeasure(clip_densities(np.full(3, 0.5)))
        baseline = cross_entropy(
            ensemble_forward(evidence, baseline_measure, head), y)
        assert fitted.validation_loss < baseline
        # the informative criterion should dominate
        assert int(np.argmax(fitted.measure.densities)) == 1

    def test_final_loss_never_exceeds_generation_zero(self):
        evidence, y, head = informative_fixture(seed=3)
        config = DEConfig(dimension=3, lower_bound=0.0, upper_bound=1.0,
                          population_size=8, max_generations=15, seed=2)
        fitted = fit_densities(evidence, y, head, config)
        assert fitted.validation_loss <= fitted.history.best_fitness[0]

    def test_fixed_seed_reproduces_the_fit(self):
        evidence, y, head = informative_fixture(seed=4)
        config = dict(dimension=3, lower_bound=0.0, upper_bound=1.0,
                      population_size=8, max_generations=12, seed=11)
        a = fit_densities(evidence, y, head, DEConfig(**config))
        b = fit_densities(evidence, y, head, DEConfig(**config))
        assert np.array_equal(a.measure.densities, b.measure.densities)
        assert a.validation_loss == b.validation_loss

    def test_objective_is_deterministic(self):
        evidence, y, head = informative_fixture(seed=6)
        measure = SugenoMeasure(clip_densities(np.array([0.3, 0.8, 0.1])))
        first = cross_entropy(ensemble_forward(evidence, measure, head), y)
        second = cross_entropy(ensemble_forward(evidence, measure, head), y)
        assert first == second

    def test_dimension_mismatch(self):
        evidence, y, head = informative_fixture()
        config = DEConfig(dimension=2, lower_bound=0.0, upper_bound=1.0)
        with pytest.raises(ShapeMismatchError):
            fit_densities(evidence, y, head, config)

    def test_bounds_must_sit_inside_unit_box(self):
        evidence, y, head = informative_fixture()
        config = DEConfig(dimension=3, lower_bound=-0.5, upper_bound=1.0)
        with pytest.raises(ValueError):
            fit_densities(evidence, y, head, config)


class TestFittedEnsemblePrediction:
    def test_argmax_with_tie_goes_to_the_lowest_class(self):
        head = LinearHead(weights=np.eye(2), bias=np.zeros(2))
        ensemble = FittedEnsemble(measure=SugenoMeasure([1.0]), head=head)
        predictions = ensemble.predict([np.array([[0.4, 0.4], [0.1, 0.9]])])
        np.testing.assert_array_equal(predictions, [0, 1])

    def test_default_criteria_names(self):
        head = LinearHead(weights=np.eye(2), bias=np.zeros(2))
        ensemble = FittedEnsemble(measure=SugenoMeasure([1.0]), head=head)
        assert ensemble.criteria_names == ("criterion_0",)

    def test_name_count_checked(self):
        head = LinearHead(weights=np.eye(2), bias=np.zeros(2))
        with pytest.raises(ShapeMismatchError):
            FittedEnsemble(measure=SugenoMeasure([1.0]), head=head,
                           criteria_names=("a", "b"))


class TestChoquetEnsembleClassifier:
    def make_estimator(self, head, **overrides):
        params = dict(population_size=8, max_generations=15, seed=7)
        params.update(overrides)
        return ChoquetEnsembleClassifier(head, **params)

    def test_fit_exposes_the_usual_attributes(self):
        evidence, y, head = informative_fixture(seed=8)
        est = self.make_estimator(head).fit(evidence, y)
        assert est.densities_.shape == (3,)
        assert est.lambda_ > -1.0
        np.testing.assert_array_equal(est.classes_, [0, 1, 2])
        assert est.n_criteria_ == 3
        assert np.isfinite(est.validation_loss_)

    def test_predict_matches_probability_argmax(self):
        evidence, y, head = informative_fixture(seed=9)
        est = self.make_estimator(head).fit(evidence, y)
        np.testing.assert_array_equal(
            est.predict(evidence), np.argmax(est.predict_proba(evidence), axis=1))

    def test_score_is_plain_accuracy(self):
        evidence, y, head = informative_fixture(seed=10)
        est = self.make_estimator(head).fit(evidence, y)
        assert est.score(evidence, y) == (est.predict(evidence) == y).mean()

    def test_clone_reproduces_the_fit(self):
        evidence, y, head = informative_fixture(seed=12)
        est = self.make_estimator(head)
        cloned = clone(est)
        a = est.fit(evidence, y)
        b = cloned.fit(evidence, y)
        assert np.array_equal(a.densities_, b.densities_)

    def test_get_params_keys(self):
        est = self.make_estimator(LinearHead(np.eye(2), np.zeros(2)))
        assert set(est.get_params()) == {
            "head", "population_size", "scale_factor", "crossover_rate",
            "max_generations", "seed"}

    def test_predict_before_fit(self):
        est = self.make_estimator(LinearHead(np.eye(2), np.zeros(2)))
        with pytest.raises(NotFittedError):
            est.predict([np.ones((1, 2))])
