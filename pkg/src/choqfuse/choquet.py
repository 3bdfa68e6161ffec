"""Choquet-integral aggregation of stacked evidence matrices.

The batched path treats every (sample, feature) position independently: it
sorts the criterion values there in descending order, walks the matching
densities through the union rule to price each growing coalition, forces
the full coalition to measure one, and dots the sorted values with the
coalition-measure increments. A scalar brute-force twin built on subset
measure queries backs the batched path in the tests.
"""

import math

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from ._validation import check_evidence
from .errors import ShapeMismatchError
from .measures import SugenoMeasure

__all__ = ["ChoquetAggregator", "choquet_aggregate", "choquet_oracle"]

# Subset bookkeeping in the oracle is only meant for small ensembles.
_ORACLE_MAX_CRITERIA = 12


def choquet_aggregate(evidence, measure):
    """Fuse stacked criterion matrices into one matrix, position by position.

    Parameters
    ----------
    evidence : sequence of n_criteria matrices of shape (n_samples, n_features)
        One matrix per criterion, all sharing one shape. A ready 3-D array
        of shape (n_criteria, n_samples, n_features) is accepted as well.
    measure : SugenoMeasure
        Measure whose density count matches the criterion count.

    Returns
    -------
    ndarray of shape (n_samples, n_features)
        Every output entry lies between the smallest and largest criterion
        value at its position, and repeated calls on the same input return
        bitwise-identical results.
    """
    stack = check_evidence(evidence)
    n = measure.n_criteria
    if stack.shape[0] != n:
        raise ShapeMismatchError(
            f"evidence holds {stack.shape[0]} criteria but the measure has {n}")
    values = np.moveaxis(stack, 0, -1)
    # Stable descending order; ties keep the original criterion index.
    order = np.argsort(-values, axis=-1, kind="stable")
    ranked = np.take_along_axis(values, order, axis=-1)
    dens = measure.densities[order]
    coalition = np.empty_like(dens)
    coalition[..., 0] = dens[..., 0]
    lam = measure.lambda_
    for k in range(1, n):
        prev = coalition[..., k - 1]
        coalition[..., k] = prev + dens[..., k] + lam * prev * dens[..., k]
    coalition[..., n - 1] = 1.0  # the full coalition has measure one
    weights = np.diff(coalition, axis=-1, prepend=0.0)
    return (ranked * weights).sum(axis=-1)


def choquet_oracle(values, measure):
    """Scalar brute-force Choquet integral used as an independent check.

    Walks the descending permutation explicitly and prices every level
    increment through `SugenoMeasure.of_subset` on the growing coalition.
    Shares no accumulation code with `choquet_aggregate`.
    """
    vals = [float(v) for v in values]
    n = len(vals)
    if n != measure.n_criteria:
        raise ShapeMismatchError(
            f"got {n} values but the measure has {measure.n_criteria} criteria")
    if n > _ORACLE_MAX_CRITERIA:
        raise ValueError(f"oracle supports at most {_ORACLE_MAX_CRITERIA} criteria")
    if not all(math.isfinite(v) for v in vals):
        raise ValueError("values must be finite")
    ranking = sorted(range(n), key=lambda i: (-vals[i], i))
    total = 0.0
    previous = 0.0
    for depth in range(1, n + 1):
        m = measure.of_subset(ranking[:depth])
        total += vals[ranking[depth - 1]] * (m - previous)
        previous = m
    return total


class ChoquetAggregator(TransformerMixin, BaseEstimator):
    """Fusion transformer so the aggregation composes with pipelines.

    Parameters
    ----------
    densities : array-like of shape (n_criteria,)
        Per-criterion fuzzy densities; the interaction parameter is solved
        during `fit`.

    Attributes
    ----------
    measure_ : SugenoMeasure
        Measure built from the densities when fitted.

    Examples
    --------
    >>> fused = ChoquetAggregator([0.5, 0.5]).fit_transform([[[1.0, 0.0]],
    ...                                                      [[0.0, 1.0]]])
    >>> fused.tolist()
    [[0.5, 0.5]]
    """

    def __init__(self, densities):
        self.densities = densities

    def fit(self, X, y=None):
        stack = check_evidence(X)
        measure = SugenoMeasure(self.densities)
        if stack.shape[0] != measure.n_criteria:
            raise ShapeMismatchError(
                f"evidence holds {stack.shape[0]} criteria but "
                f"{measure.n_criteria} densities were configured")
        self.measure_ = measure
        return self

    def transform(self, X):
        check_is_fitted(self, "measure_")
        return choquet_aggregate(X, self.measure_)
