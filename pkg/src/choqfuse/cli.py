"""Command-line surface: lambda, aggregate, fit, evaluate, and metrics.

Usage errors exit with status 2 (argparse). Data errors, bad file contents,
and shape mismatches print one ``error:`` diagnostic naming the offending
input and exit with status 1. Identical invocations with the same seed
produce byte-identical output.
"""

import argparse
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .choquet import choquet_aggregate
from .ensemble import fit_densities
from .errors import ChoqfuseError, ShapeMismatchError
from .io import (load_head, load_label_column, load_matrix, load_model,
                 save_model, write_matrix)
from .measures import SugenoMeasure, solve_lambda
from .metrics import confusion_matrix, macro_metrics
from .optimize import DEConfig

__all__ = ["main", "RunManifest"]

_REPORT_METRICS = ("precision", "recall", "specificity", "f1", "auc_balanced", "mcc")


@dataclass
class RunManifest:
    """Validated bundle of everything one `fit` invocation needs."""

    criteria_names: tuple
    feature_paths: tuple
    labels_path: str
    head_path: str
    population_size: int
    scale_factor: float
    crossover_rate: float
    max_generations: int
    seed: int
    out_path: str

    def __post_init__(self):
        self.feature_paths = tuple(str(p) for p in self.feature_paths)
        self.criteria_names = tuple(self.criteria_names)
        if not self.feature_paths:
            raise ShapeMismatchError("at least one feature file is required")
        for p in (*self.feature_paths, self.labels_path, self.head_path):
            if not Path(p).is_file():
                raise FileNotFoundError(f"{p}: file not found")


def _float_list(text):
    try:
        return [float(tok) for tok in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"expected comma-separated numbers, got {text!r}") from None


def _path_list(text):
    paths = [tok for tok in text.split(",") if tok]
    if not paths:
        raise argparse.ArgumentTypeError("expected comma-separated file paths")
    return paths


def _fmt(value):
    return "undefined" if value is None else f"{value:.6f}"


def _print_report(report):
    class_names = [f"class_{k}" for k in range(len(report.per_class))]
    headers = ["metric", *class_names, "macro"]
    rows = []
    for name in _REPORT_METRICS:
        macro_name = "mcc_macro_mean" if name == "mcc" else name
        rows.append([name,
                     *(_fmt(getattr(m, name)) for m in report.per_class),
                     _fmt(getattr(report, macro_name))])
    blank = [""] * len(class_names)
    rows.append(["accuracy", *blank, _fmt(report.accuracy)])
    rows.append(["mcc_multiclass", *blank, _fmt(report.mcc_multiclass)])
    widths = [max(len(line[i]) for line in [headers, *rows])
              for i in range(len(headers))]
    for line in [headers, *rows]:
        print("  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip())


def _report_payload(report):
    return {
        "accuracy": report.accuracy,
        "macro": {
            "precision": report.precision,
            "recall": report.recall,
            "specificity": report.specificity,
            "f1": report.f1,
            "auc_balanced": report.auc_balanced,
            "mcc_macro_mean": report.mcc_macro_mean,
            "mcc_multiclass": report.mcc_multiclass,
        },
        "per_class": [
            {"class": k, "tp": m.tp, "tn": m.tn, "fp": m.fp, "fn": m.fn,
             "precision": m.precision, "recall": m.recall,
             "specificity": m.specificity, "f1": m.f1,
             "auc_balanced": m.auc_balanced, "mcc": m.mcc}
            for k, m in enumerate(report.per_class)
        ],
    }


def _emit_report(report, out_path):
    _print_report(report)
    if out_path:
        payload = _report_payload(report)
        Path(out_path).write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _cmd_lambda(args):
    value = solve_lambda(args.densities)
    print(format(value, "#.9g"))
    return 0


def _cmd_aggregate(args):
    matrices = [load_matrix(p) for p in args.inputs]
    measure = SugenoMeasure(args.densities)
    fused = choquet_aggregate(matrices, measure)
    write_matrix(fused, args.out)
    return 0


def _cmd_fit(args):
    manifest = RunManifest(
        criteria_names=[Path(p).stem for p in args.features],
        feature_paths=args.features,
        labels_path=args.labels,
        head_path=args.head,
        population_size=args.population_size,
        scale_factor=args.scale_factor,
        crossover_rate=args.crossover_rate,
        max_generations=args.max_generations,
        seed=args.seed,
        out_path=args.out,
    )
    evidence = [load_matrix(p) for p in manifest.feature_paths]
    labels = load_label_column(manifest.labels_path)
    head = load_head(manifest.head_path)
    n = len(evidence)
    config = DEConfig(
        dimension=n,
        lower_bound=np.zeros(n),
        upper_bound=np.ones(n),
        population_size=manifest.population_size,
        scale_factor=manifest.scale_factor,
        crossover_rate=manifest.crossover_rate,
        max_generations=manifest.max_generations,
        seed=manifest.seed,
    )
    ensemble = fit_densities(evidence, labels, head, config,
                             criteria_names=manifest.criteria_names)
    save_model(ensemble, manifest.head_path, manifest.out_path)
    print(f"criteria={','.join(ensemble.criteria_names)}")
    print(f"densities={','.join(repr(float(v)) for v in ensemble.measure.densities)}")
    print(f"lambda={ensemble.measure.lambda_!r}")
    print(f"validation_loss={ensemble.validation_loss!r}")
    print(f"generations={config.max_generations}")
    print(f"model={manifest.out_path}")
    return 0


def _binarize(indices):
    # Class 0 stays the positive class; everything else collapses to class 1.
    return (np.asarray(indices) != 0).astype(np.int64)


def _cmd_evaluate(args):
    ensemble = load_model(args.model)
    evidence = [load_matrix(p) for p in args.features]
    if len(evidence) != ensemble.measure.n_criteria:
        raise ShapeMismatchError(
            f"model expects {ensemble.measure.n_criteria} feature files, "
            f"got {len(evidence)}")
    labels = load_label_column(args.labels)
    predictions = ensemble.predict(evidence)
    n_classes = ensemble.head.n_classes
    if labels.size and (labels.min() < 0 or labels.max() >= n_classes):
        raise IndexError(f"labels fall outside [0, {n_classes})")
    if args.binary:
        labels = _binarize(labels)
        predictions = _binarize(predictions)
        n_classes = 2
    report = macro_metrics(confusion_matrix(labels, predictions, n_classes))
    _emit_report(report, args.out)
    return 0


def _cmd_metrics(args):
    predictions = load_label_column(args.predictions)
    labels = load_label_column(args.labels)
    report = macro_metrics(confusion_matrix(labels, predictions, args.classes))
    _emit_report(report, args.out)
    return 0


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="choqfuse",
        description="Choquet-integral ensemble fusion on feature matrices")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lambda",
                       help="solve the measure scaling parameter from densities")
    p.add_argument("--densities", type=_float_list, required=True,
                   help="comma-separated fuzzy densities")
    p.set_defaults(handler=_cmd_lambda)

    p = sub.add_parser("aggregate", help="Choquet-fuse criterion matrices")
    p.add_argument("--inputs", type=_path_list, required=True,
                   help="comma-separated CSV matrices, one per criterion")
    p.add_argument("--densities", type=_float_list, required=True)
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(handler=_cmd_aggregate)

    p = sub.add_parser("fit", help="fit fuzzy densities against validation loss")
    p.add_argument("--features", type=_path_list, required=True,
                   help="comma-separated CSV feature matrices, one per criterion")
    p.add_argument("--labels", required=True, help="CSV with one integer column")
    p.add_argument("--head", required=True,
                   help="CSV head file: weight rows followed by one bias row")
    p.add_argument("--np", dest="population_size", type=int, default=15)
    p.add_argument("--generations", dest="max_generations", type=int, default=100)
    p.add_argument("--scale-f", dest="scale_factor", type=float, default=0.5)
    p.add_argument("--cr", dest="crossover_rate", type=float, default=0.9)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output model JSON path")
    p.set_defaults(handler=_cmd_fit)

    p = sub.add_parser("evaluate", help="score a fitted model on labeled features")
    p.add_argument("--features", type=_path_list, required=True)
    p.add_argument("--labels", required=True)
    p.add_argument("--model", required=True, help="model JSON written by fit")
    p.add_argument("--binary", action="store_true",
                   help="collapse classes to class 0 versus the rest")
    p.add_argument("--out", default=None, help="optional JSON report path")
    p.set_defaults(handler=_cmd_evaluate)

    p = sub.add_parser("metrics", help="metric report from raw predictions")
    p.add_argument("--predictions", required=True, help="CSV with one integer column")
    p.add_argument("--labels", required=True)
    p.add_argument("--classes", type=int, required=True)
    p.add_argument("--out", default=None, help="optional JSON report path")
    p.set_defaults(handler=_cmd_metrics)
    return parser


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except (ChoqfuseError, FileNotFoundError, IndexError) as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
