"""Input validation helpers shared by the estimators and core functions."""

import numpy as np

from .errors import InvalidDensityError, ShapeMismatchError


def check_densities(values):
    """Validate a fuzzy density vector and return it as a read-only float array.

    With two or more criteria every density must lie strictly inside (0, 1);
    a lone criterion must carry density exactly 1 so the full set keeps
    measure one.
    """
    g = np.asarray(values, dtype=float)
    if g.ndim != 1 or g.size == 0:
        raise InvalidDensityError(
            f"densities must form a non-empty 1-D sequence, got shape {g.shape}")
    if not np.all(np.isfinite(g)):
        raise InvalidDensityError("densities must all be finite")
    if g.size == 1:
        if g[0] != 1.0:
            raise InvalidDensityError(
                f"a single-criterion density must equal 1, got {g[0]!r}")
    elif np.any(g <= 0.0) or np.any(g >= 1.0):
        raise InvalidDensityError(
            "densities must lie strictly inside (0, 1) when there are "
            f"two or more criteria, got {g.tolist()}")
    g = g.copy()
    g.setflags(write=False)
    return g


def check_evidence(X):
    """Coerce evidence to one (n_criteria, n_samples, n_features) float array.

    Accepts a ready 3-D array or any sequence of 2-D matrices; all matrices
    must share one shape and contain only finite values.
    """
    if isinstance(X, np.ndarray) and X.ndim == 3:
        stack = np.asarray(X, dtype=float)
    else:
        matrices = [np.asarray(m, dtype=float) for m in X]
        if not matrices:
            raise ShapeMismatchError("evidence needs at least one criterion matrix")
        for k, m in enumerate(matrices):
            if m.ndim != 2:
                raise ShapeMismatchError(
                    f"criterion matrix {k} must be 2-D, got shape {m.shape}")
        shapes = {m.shape for m in matrices}
        if len(shapes) > 1:
            raise ShapeMismatchError(
                f"criterion matrices disagree in shape: {sorted(shapes)}")
        stack = np.stack(matrices, axis=0)
    if stack.shape[0] == 0:
        raise ShapeMismatchError("evidence needs at least one criterion matrix")
    if not np.all(np.isfinite(stack)):
        raise ValueError("evidence contains non-finite entries")
    return stack


def check_labels(labels, n_samples, n_classes):
    """Validate integer class labels against a batch size and class count."""
    arr = np.asarray(labels)
    if arr.ndim != 1 or arr.shape[0] != n_samples:
        raise ShapeMismatchError(
            f"expected {n_samples} labels in a 1-D sequence, got shape {arr.shape}")
    if arr.size and np.issubdtype(arr.dtype, np.integer):
        y = arr.astype(np.int64)
    else:
        yf = np.asarray(arr, dtype=float)
        if yf.size and (not np.all(np.isfinite(yf)) or np.any(yf != np.trunc(yf))):
            raise ValueError("class labels must be integers")
        y = yf.astype(np.int64)
    if y.size and (y.min() < 0 or y.max() >= n_classes):
        bad = int(y[(y < 0) | (y >= n_classes)][0])
        raise IndexError(f"label {bad} outside [0, {n_classes})")
    return y
