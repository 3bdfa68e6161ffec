"""Fused ensemble forward pass and density fitting against validation loss.

The forward pass fuses the criterion feature matrices with a Choquet
integral, applies one frozen linear head, and normalizes row-wise with a
softmax. Fitting searches the per-criterion densities by differential
evolution, scoring every candidate by the mean categorical cross-entropy
of that forward pass on held-out labeled data.
"""

from dataclasses import dataclass, field

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_evidence, check_labels
from .choquet import choquet_aggregate
from .errors import ShapeMismatchError
from .measures import SugenoMeasure
from .optimize import DEConfig, DEHistory, differential_evolution

__all__ = [
    "LinearHead",
    "FittedEnsemble",
    "ChoquetEnsembleClassifier",
    "softmax",
    "cross_entropy",
    "ensemble_forward",
    "clip_densities",
    "fit_densities",
    "DENSITY_EPS",
]

# Admissibility clip applied to raw candidates before measure construction.
DENSITY_EPS = 1e-6
# Probability floor inside the cross-entropy so the loss stays finite.
_PROB_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class LinearHead:
    """Frozen prediction layer: logits = features @ weights + bias."""

    weights: np.ndarray
    bias: np.ndarray

    def __post_init__(self):
        weights = np.asarray(self.weights, dtype=float)
        bias = np.asarray(self.bias, dtype=float)
        if weights.ndim != 2 or weights.shape[0] < 1:
            raise ValueError(f"weights must be a 2-D matrix, got shape {weights.shape}")
        if bias.ndim != 1 or bias.shape[0] != weights.shape[1]:
            raise ShapeMismatchError(
                f"bias of shape {bias.shape} does not match weights {weights.shape}")
        if weights.shape[1] < 2:
            raise ValueError("the head needs at least two output classes")
        if not (np.all(np.isfinite(weights)) and np.all(np.isfinite(bias))):
            raise ValueError("head entries must be finite")
        weights = weights.copy()
        bias = bias.copy()
        weights.setflags(write=False)
        bias.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "bias", bias)

    @property
    def n_features(self):
        return int(self.weights.shape[0])

    @property
    def n_classes(self):
        return int(self.weights.shape[1])


def softmax(logits, axis=-1):
    """Probabilities from logits, max-subtracted so large values cannot overflow."""
    z = np.asarray(logits, dtype=float)
    z = z - z.max(axis=axis, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=axis, keepdims=True)


def cross_entropy(probabilities, labels):
    """Mean negative log-probability of the true class, floored at 1e-12.

    Always finite: a vanishing probability on the true class contributes
    ``-log(1e-12)`` instead of an infinity.
    """
    p = np.asarray(probabilities, dtype=float)
    if p.ndim != 2:
        raise ShapeMismatchError(f"probabilities must be 2-D, got shape {p.shape}")
    y = check_labels(labels, p.shape[0], p.shape[1])
    picked = p[np.arange(p.shape[0]), y]
    return float(np.mean(-np.log(np.maximum(picked, _PROB_FLOOR))))


def ensemble_forward(evidence, measure, head):
    """Per-sample class probabilities: fuse, apply the head, softmax each row."""
    fused = choquet_aggregate(evidence, measure)
    if fused.shape[1] != head.n_features:
        raise ShapeMismatchError(
            f"evidence has {fused.shape[1]} features but the head expects "
            f"{head.n_features}")
    return softmax(fused @ head.weights + head.bias, axis=1)


def clip_densities(candidate):
    """Pull a raw candidate vector into the admissible open density interval."""
    return np.clip(np.asarray(candidate, dtype=float), DENSITY_EPS, 1.0 - DENSITY_EPS)


@dataclass
class FittedEnsemble:
    """A fitted fusion model plus the metadata needed to reproduce the fit."""

    measure: SugenoMeasure
    head: LinearHead
    criteria_names: tuple = ()
    seed: int = 0
    de_config: DEConfig = None
    validation_loss: float = float("nan")
    history: DEHistory = field(default=None, repr=False)

    def __post_init__(self):
        self.criteria_names = tuple(self.criteria_names)
        if self.criteria_names and len(self.criteria_names) != self.measure.n_criteria:
            raise ShapeMismatchError(
                f"{len(self.criteria_names)} criteria names for "
                f"{self.measure.n_criteria} densities")
        if not self.criteria_names:
            self.criteria_names = tuple(
                f"criterion_{k}" for k in range(self.measure.n_criteria))

    def predict_proba(self, evidence):
        return ensemble_forward(evidence, self.measure, self.head)

    def predict(self, evidence):
        """Per-row argmax of the class probabilities; ties go to the lowest class."""
        return np.argmax(self.predict_proba(evidence), axis=1)


def fit_densities(evidence, labels, head, de_config, criteria_names=()):
    """Fit per-criterion densities by evolving candidates against validation loss.

    Every candidate vector is clipped into ``[1e-6, 1 - 1e-6]``, turned
    into a measure, and scored by the mean cross-entropy of the fused
    forward pass on the given labeled evidence. The search is fully
    deterministic for a fixed ``de_config.seed``.

    Parameters
    ----------
    evidence : sequence of n_criteria matrices of shape (n_samples, n_features)
        Held-out validation features per criterion.
    labels : array-like of shape (n_samples,)
        Integer class indices below ``head.n_classes``.
    head : LinearHead
    de_config : DEConfig
        Its dimension must equal the criterion count and its box must sit
        inside [0, 1].
    criteria_names : sequence of str, optional

    Returns
    -------
    FittedEnsemble
    """
    stack = check_evidence(evidence)
    n_criteria = stack.shape[0]
    if de_config.dimension != n_criteria:
        raise ShapeMismatchError(
            f"optimizer dimension {de_config.dimension} does not match "
            f"{n_criteria} criteria")
    if np.any(de_config.lower_bound < 0.0) or np.any(de_config.upper_bound > 1.0):
        raise ValueError("density search bounds must sit inside [0, 1]")
    if stack.shape[2] != head.n_features:
        raise ShapeMismatchError(
            f"evidence has {stack.shape[2]} features but the head expects "
            f"{head.n_features}")
    y = check_labels(labels, stack.shape[1], head.n_classes)

    def objective(candidate):
        measure = SugenoMeasure(clip_densities(candidate))
        return cross_entropy(ensemble_forward(stack, measure, head), y)

    result = differential_evolution(objective, de_config)
    measure = SugenoMeasure(clip_densities(result.x))
    return FittedEnsemble(
        measure=measure,
        head=head,
        criteria_names=criteria_names,
        seed=de_config.seed,
        de_config=de_config,
        validation_loss=result.fun,
        history=result.history,
    )


class ChoquetEnsembleClassifier(ClassifierMixin, BaseEstimator):
    """Scikit-learn classifier around the fused ensemble.

    `fit` searches the fuzzy densities on the supplied labeled evidence,
    which plays the role of a validation set; the head itself stays frozen.

    Parameters
    ----------
    head : LinearHead
        Frozen prediction layer applied to the fused features.
    population_size : int, default 15
    scale_factor : float, default 0.5
    crossover_rate : float, default 0.9
    max_generations : int, default 100
    seed : int, default 0

    Attributes
    ----------
    ensemble_ : FittedEnsemble
    densities_ : ndarray of shape (n_criteria,)
    lambda_ : float
    validation_loss_ : float
    history_ : DEHistory
    classes_ : ndarray of shape (n_classes,)
    """

    def __init__(self, head, population_size=15, scale_factor=0.5,
                 crossover_rate=0.9, max_generations=100, seed=0):
        self.head = head
        self.population_size = population_size
        self.scale_factor = scale_factor
        self.crossover_rate = crossover_rate
        self.max_generations = max_generations
        self.seed = seed

    def fit(self, X, y):
        stack = check_evidence(X)
        n = stack.shape[0]
        config = DEConfig(
            dimension=n,
            lower_bound=np.zeros(n),
            upper_bound=np.ones(n),
            population_size=self.population_size,
            scale_factor=self.scale_factor,
            crossover_rate=self.crossover_rate,
            max_generations=self.max_generations,
            seed=self.seed,
        )
        self.ensemble_ = fit_densities(stack, y, self.head, config)
        self.densities_ = self.ensemble_.measure.densities
        self.lambda_ = self.ensemble_.measure.lambda_
        self.validation_loss_ = self.ensemble_.validation_loss
        self.history_ = self.ensemble_.history
        self.n_criteria_ = n
        self.classes_ = np.arange(self.head.n_classes)
        return self

    def predict_proba(self, X):
        check_is_fitted(self, "ensemble_")
        return self.ensemble_.predict_proba(X)

    def predict(self, X):
        check_is_fitted(self, "ensemble_")
        return self.ensemble_.predict(X)
