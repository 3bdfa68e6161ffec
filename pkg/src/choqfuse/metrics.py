"""Confusion-matrix construction and the classification metric suite.

Per-class scores come from one-vs-rest counts. ``auc_balanced`` is the
closed form (sensitivity + specificity) / 2, i.e. the balanced accuracy of
hard predictions at a single operating point. It is not a threshold-sweep
ROC integral and will generally differ from one; the name keeps that
distinction visible in reports.

Zero denominators yield ``None`` rather than a silent 0 so degenerate
inputs stay distinguishable from genuinely zero scores.
"""

import math
from dataclasses import dataclass

import numpy as np

from ._validation import check_labels
from .errors import ShapeMismatchError

__all__ = [
    "ClassMetrics",
    "MacroMetrics",
    "confusion_matrix",
    "class_metrics",
    "macro_metrics",
]


def confusion_matrix(y_true, y_pred, n_classes):
    """Counts with true classes on rows and predicted classes on columns.

    Raises
    ------
    ShapeMismatchError
        If the two sequences differ in length.
    IndexError
        If any value falls outside ``[0, n_classes)``.
    """
    t = np.asarray(y_true)
    p = np.asarray(y_pred)
    if t.ndim != 1 or p.ndim != 1 or t.shape[0] != p.shape[0]:
        raise ShapeMismatchError(
            f"predictions and labels must be 1-D and equally long, "
            f"got shapes {p.shape} and {t.shape}")
    n_classes = int(n_classes)
    if n_classes < 1:
        raise ValueError(f"n_classes must be positive, got {n_classes}")
    t = check_labels(t, t.shape[0], n_classes)
    p = check_labels(p, p.shape[0], n_classes)
    cm = np.zeros((n_classes, n_classes), dtype=np.int64)
    np.add.at(cm, (t, p), 1)
    return cm


def _check_counts(cm):
    cm = np.asarray(cm)
    if cm.ndim != 2 or cm.shape[0] != cm.shape[1]:
        raise ShapeMismatchError(f"confusion matrix must be square, got {cm.shape}")
    if np.any(cm < 0):
        raise ValueError("confusion matrix counts must be non-negative")
    return cm.astype(np.int64)


def _ratio(num, den):
    return None if den == 0 else num / den


@dataclass(frozen=True)
class ClassMetrics:
    """One-vs-rest counts and scores for a single class; ``None`` marks
    metrics whose denominator vanished."""

    tp: int
    tn: int
    fp: int
    fn: int
    precision: float | None
    recall: float | None
    specificity: float | None
    f1: float | None
    auc_balanced: float | None
    mcc: float | None


def class_metrics(cm, class_index):
    """One-vs-rest metrics for one class of a confusion matrix."""
    cm = _check_counts(cm)
    k = int(class_index)
    if k < 0 or k >= cm.shape[0]:
        raise IndexError(f"class index {k} outside [0, {cm.shape[0]})")
    total = int(cm.sum())
    tp = int(cm[k, k])
    fn = int(cm[k].sum()) - tp
    fp = int(cm[:, k].sum()) - tp
    tn = total - tp - fn - fp

    precision = _ratio(tp, tp + fp)
    recall = _ratio(tp, tp + fn)
    specificity = _ratio(tn, tn + fp)
    if precision is None or recall is None or precision + recall == 0:
        f1 = None
    else:
        f1 = 2.0 * precision * recall / (precision + recall)
    if recall is None or specificity is None:
        auc_balanced = None
    else:
        auc_balanced = (recall + specificity) / 2.0
    denom = (tp + fn) * (tn + fp) * (tp + fp) * (tn + fn)
    if denom == 0:
        mcc = None
    else:
        mcc = (tp * tn - fn * fp) / math.sqrt(denom)
    return ClassMetrics(tp=tp, tn=tn, fp=fp, fn=fn, precision=precision,
                        recall=recall, specificity=specificity, f1=f1,
                        auc_balanced=auc_balanced, mcc=mcc)


@dataclass(frozen=True)
class MacroMetrics:
    """Unweighted per-class means plus overall accuracy and two MCC variants.

    ``mcc_macro_mean`` averages the per-class one-vs-rest coefficients;
    ``mcc_multiclass`` is the single coefficient of the full matrix. Both
    are reported because the two aggregations genuinely differ.
    """

    accuracy: float | None
    precision: float | None
    recall: float | None
    specificity: float | None
    f1: float | None
    auc_balanced: float | None
    mcc_macro_mean: float | None
    mcc_multiclass: float | None
    per_class: tuple


def _mean(values):
    values = list(values)
    if any(v is None for v in values) or not values:
        return None
    return math.fsum(values) / len(values)


def _multiclass_mcc(cm):
    """Correlation between true and predicted assignments over all classes."""
    total = int(cm.sum())
    trace = int(np.trace(cm))
    pred_sums = cm.sum(axis=0).astype(float)
    true_sums = cm.sum(axis=1).astype(float)
    cov = trace * total - float(pred_sums @ true_sums)
    var_pred = total * total - float(pred_sums @ pred_sums)
    var_true = total * total - float(true_sums @ true_sums)
    if var_pred <= 0 or var_true <= 0:
        return None
    return cov / math.sqrt(var_pred * var_true)


def macro_metrics(cm):
    """Aggregate report over all classes of a confusion matrix."""
    cm = _check_counts(cm)
    if cm.shape[0] < 2:
        raise ValueError("macro metrics need at least two classes")
    per = tuple(class_metrics(cm, k) for k in range(cm.shape[0]))
    total = int(cm.sum())
    return MacroMetrics(
        accuracy=_ratio(int(np.trace(cm)), total),
        precision=_mean(m.precision for m in per),
        recall=_mean(m.recall for m in per),
        specificity=_mean(m.specificity for m in per),
        f1=_mean(m.f1 for m in per),
        auc_balanced=_mean(m.auc_balanced for m in per),
        mcc_macro_mean=_mean(m.mcc for m in per),
        mcc_multiclass=_multiclass_mcc(cm),
        per_class=per,
    )
