"""CSV matrix loading, head files, and fitted-model serialization.

Matrices are comma-separated decimal rows with one optional header line,
detected by the first line failing to parse as numbers. Written matrices
use Python's shortest round-trip float form, so reloading reproduces the
exact values. Model files are JSON documents with sorted keys, making a
repeated identical run byte-identical.
"""

import json
from pathlib import Path

import numpy as np

from .ensemble import FittedEnsemble, LinearHead
from .errors import (MatrixParseError, NonNumericCellError, RaggedRowsError,
                     TooFewRowsError)
from .measures import SugenoMeasure
from .optimize import DEConfig, DEHistory

__all__ = [
    "load_matrix",
    "load_head",
    "load_label_column",
    "write_matrix",
    "save_model",
    "load_model",
]

_MODEL_FORMAT = "choqfuse-model"
_MODEL_VERSION = 1


def _parse_row(cells, path, row):
    values = []
    for col, cell in enumerate(cells, start=1):
        try:
            value = float(cell)
        except ValueError:
            raise NonNumericCellError(
                f"{path}: row {row}, column {col}: {cell.strip()!r} "
                "is not numeric") from None
        if not np.isfinite(value):
            raise NonNumericCellError(
                f"{path}: row {row}, column {col}: {cell.strip()!r} is not finite")
        values.append(value)
    return values


def load_matrix(path):
    """Parse a comma-separated numeric matrix, skipping one header line if present.

    Errors name the file and the 1-based row/column of the offending cell.
    """
    path = Path(path)
    lines = path.read_text().splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    start = 0
    if lines:
        try:
            _parse_row(lines[0].split(","), path, 1)
        except NonNumericCellError:
            start = 1  # header line
    rows = []
    width = None
    for row_number, line in enumerate(lines[start:], start=start + 1):
        cells = line.split(",")
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise RaggedRowsError(
                f"{path}: row {row_number} has {len(cells)} cells, expected {width}")
        rows.append(_parse_row(cells, path, row_number))
    if not rows:
        raise MatrixParseError(f"{path}: no data rows")
    return np.asarray(rows, dtype=float)


def load_head(path):
    """Load a prediction head: every row but the last is weights, the last is bias."""
    matrix = load_matrix(path)
    if matrix.shape[0] < 2:
        raise TooFewRowsError(
            f"{path}: a head needs at least 2 rows (weights plus bias), "
            f"got {matrix.shape[0]}")
    return LinearHead(weights=matrix[:-1], bias=matrix[-1])


def load_label_column(path):
    """Load a single integer column of class indices."""
    matrix = load_matrix(path)
    if matrix.shape[1] != 1:
        raise MatrixParseError(
            f"{path}: labels must form a single column, got {matrix.shape[1]}")
    column = matrix[:, 0]
    if np.any(column != np.trunc(column)):
        bad = int(np.argmax(column != np.trunc(column))) + 1
        raise MatrixParseError(f"{path}: row {bad}: labels must be integers")
    return column.astype(np.int64)


def write_matrix(matrix, path):
    """Write rows of shortest round-trip decimals so a reload is exact."""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=float))
    with open(path, "w") as fh:
        for row in matrix:
            fh.write(",".join(repr(float(v)) for v in row) + "\n")


def save_model(ensemble, head_path, path):
    """Serialize a fitted ensemble to a sorted-key JSON document."""
    config = ensemble.de_config
    doc = {
        "format": _MODEL_FORMAT,
        "version": _MODEL_VERSION,
        "criteria": list(ensemble.criteria_names),
        "densities": [float(v) for v in ensemble.measure.densities],
        "lambda": float(ensemble.measure.lambda_),
        "head_path": str(head_path),
        "seed": int(ensemble.seed),
        "validation_loss": float(ensemble.validation_loss),
        "de_config": {
            "dimension": config.dimension,
            "lower_bound": [float(v) for v in config.lower_bound],
            "upper_bound": [float(v) for v in config.upper_bound],
            "population_size": config.population_size,
            "scale_factor": config.scale_factor,
            "crossover_rate": config.crossover_rate,
            "max_generations": config.max_generations,
            "seed": config.seed,
        },
        "history": {
            "best_fitness": [float(v) for v in ensemble.history.best_fitness],
            "best_vector": [[float(v) for v in row]
                            for row in ensemble.history.best_vector],
        },
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def load_model(path):
    """Rebuild a fitted ensemble from its JSON document.

    The stored head path is reused as written, so relative paths resolve
    against the current working directory.
    """
    doc = json.loads(Path(path).read_text())
    if doc.get("format") != _MODEL_FORMAT:
        raise MatrixParseError(f"{path}: not a {_MODEL_FORMAT} document")
    head = load_head(doc["head_path"])
    config = DEConfig(**doc["de_config"])
    history = DEHistory(
        best_fitness=np.asarray(doc["history"]["best_fitness"], dtype=float),
        best_vector=np.asarray(doc["history"]["best_vector"], dtype=float),
    )
    measure = SugenoMeasure(doc["densities"], doc["lambda"])
    return FittedEnsemble(
        measure=measure,
        head=head,
        criteria_names=tuple(doc["criteria"]),
        seed=int(doc["seed"]),
        de_config=config,
        validation_loss=float(doc["validation_loss"]),
        history=history,
    )
