import numpy as np
import pytest

from choqfuse import SugenoMeasure

# Density triple and scaling parameter of a published fitted ensemble,
# reused across modules as a known-good fixture.
REFERENCE_DENSITIES = (0.12470619, 0.29971752, 0.2989895)
REFERENCE_LAMBDA = 1.5253944

# Three-class confusion counts (rows true, columns predicted) with known
# per-class and macro metric values.
THREE_CLASS_COUNTS = np.array([
    [198, 0, 2],
    [0, 98, 2],
    [0, 4, 96],
])


@pytest.fixture
def reference_measure():
    return SugenoMeasure(REFERENCE_DENSITIES)


def realize_counts(counts):
    """Label and prediction sequences whose confusion matrix equals ``counts``."""
    labels, predictions = [], []
    for t in range(counts.shape[0]):
        for p in range(counts.shape[1]):
            labels += [t] * int(counts[t, p])
            predictions += [p] * int(counts[t, p])
    return np.asarray(labels), np.asarray(predictions)
