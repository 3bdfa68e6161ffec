"""Choquet-integral ensemble fusion on precomputed feature matrices.

The package fuses several models' evidence matrices with a Choquet
integral under a Sugeno fuzzy measure, fits the per-model densities with
differential evolution against a validation cross-entropy, and scores the
resulting classifier with a full confusion-matrix metric suite. A CLI
(`choqfuse`) drives the same operations on CSV files.
"""

from .choquet import ChoquetAggregator, choquet_aggregate, choquet_oracle
from .ensemble import (ChoquetEnsembleClassifier, FittedEnsemble, LinearHead,
                       clip_densities, cross_entropy, ensemble_forward,
                       fit_densities, softmax)
from .errors import (ChoqfuseError, InvalidDensityError, MatrixParseError,
                     NoAdmissibleLambdaError, NonFiniteFitnessError,
                     NonNumericCellError, RaggedRowsError, ShapeMismatchError,
                     TooFewRowsError)
from .io import (load_head, load_label_column, load_matrix, load_model,
                 save_model, write_matrix)
from .measures import SugenoMeasure, solve_lambda
from .metrics import (ClassMetrics, MacroMetrics, class_metrics,
                      confusion_matrix, macro_metrics)
from .optimize import (DEConfig, DEHistory, DEResult, binomial_crossover,
                       differential_evolution, draw_parent_indices,
                       init_population, mutant_vector, mutate, select_trial)

__version__ = "0.1.0"

__all__ = [
    "ChoquetAggregator",
    "ChoquetEnsembleClassifier",
    "ChoqfuseError",
    "ClassMetrics",
    "DEConfig",
    "DEHistory",
    "DEResult",
    "FittedEnsemble",
    "InvalidDensityError",
    "LinearHead",
    "MacroMetrics",
    "MatrixParseError",
    "NoAdmissibleLambdaError",
    "NonFiniteFitnessError",
    "NonNumericCellError",
    "RaggedRowsError",
    "ShapeMismatchError",
    "SugenoMeasure",
    "TooFewRowsError",
    "binomial_crossover",
    "choquet_aggregate",
    "choquet_oracle",
    "class_metrics",
    "clip_densities",
    "confusion_matrix",
    "cross_entropy",
    "differential_evolution",
    "draw_parent_indices",
    "ensemble_forward",
    "fit_densities",
    "init_population",
    "load_head",
    "load_label_column",
    "load_matrix",
    "load_model",
    "macro_metrics",
    "mutant_vector",
    "mutate",
    "save_model",
    "select_trial",
    "softmax",
    "solve_lambda",
    "write_matrix",
]
