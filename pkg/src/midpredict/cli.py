"""Command-line interface.

Subcommands: synth, train, grid-search, evaluate, sensitivity, pipeline.
An optional --config file supplies key=value defaults; explicit flags win.
Exit codes: 0 success, 1 computation error, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from . import __version__
from ._util import (
    ConvergenceError,
    MidpredictError,
    ParseError,
    TrainingError,
    ValidationError,
    file_digest,
)
from .bundle import MLP, SVM, ModelBundle
from .data import generate_synthetic, load_dataset, write_dataset
from .evaluation import (
    auc,
    auc_standard_error,
    comparison_report,
    confusion,
    confusion_report,
    roc_points,
    score_correlation,
    write_roc_tsv,
)
from .mlp import MlpClassifier
from .model_selection import DEFAULT_GRID, GridSpec, grid_search, write_cv_report
from .pipeline import PipelineConfig, run_pipeline
from .scaling import DyadScaler
from .sensitivity import (
    perturbation_report,
    perturbation_text,
    ranking_text,
    run_extreme_profiles,
    single_variable_ranking,
    write_perturbation_csv,
    write_profiles_csv,
    write_ranking_csv,
)
from .serialize import load_model, save_model
from .svm import SvmClassifier

EXIT_OK = 0
EXIT_COMPUTE = 1
EXIT_USAGE = 2


def _floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(","))


def _read_config(path: str | None) -> dict[str, str]:
    if not path:
        return {}
    config = {}
    for lineno, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ParseError(f"{path}, line {lineno}: expected key = value")
        key, _, value = line.partition("=")
        config[key.strip().replace("-", "_")] = value.strip()
    return config


def _resolve(args, config: dict[str, str], key: str, cast, default):
    """Flag beats config beats built-in default."""
    flag = getattr(args, key, None)
    if flag is not None:
        return flag
    if key in config:
        return cast(config[key])
    return default


def _provenance(seed: int, data_path) -> list[str]:
    return [
        f"tool_version: {__version__}",
        f"seed: {seed}",
        f"input_sha256: {file_digest(data_path)}",
    ]


def _safe_se(a: float, n_conflict: int, n_peace: int) -> float | None:
    """Standard error, or None when the AUC is degenerate (exactly 0 or 1)."""
    if not 0.0 < a < 1.0:
        return None
    return auc_standard_error(a, n_conflict, n_peace)


def _se_text(se: float | None) -> str:
    return "undefined (degenerate AUC)" if se is None else f"{se:.6f}"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="midpredict", description="Dyad-year conflict prediction toolkit"
    )
    parser.add_argument("--version", action="version", version=f"midpredict {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("synth", help="generate a synthetic dataset CSV")
    p.add_argument("--config")
    p.add_argument("--peace", type=int)
    p.add_argument("--conflict", type=int)
    p.add_argument("--separation", type=float)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)

    p = sub.add_parser("train", help="train one model and write a model file")
    p.add_argument("--config")
    p.add_argument("--model", choices=[MLP, SVM])
    p.add_argument("--data")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True)
    p.add_argument("--c", type=float, help="SVM box constraint")
    p.add_argument("--gamma", type=float, help="SVM rbf width")
    p.add_argument("--kernel", choices=["rbf", "linear"])
    p.add_argument("--kkt-tol", type=float, dest="kkt_tol")
    p.add_argument("--max-passes", type=int, dest="max_passes")
    p.add_argument("--hidden", type=int, help="MLP hidden units")
    p.add_argument("--cycles", type=int, help="MLP training cycles")

    p = sub.add_parser("grid-search", help="cross-validated (C, gamma) search")
    p.add_argument("--config")
    p.add_argument("--data")
    p.add_argument("--k", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--c-values", dest="c_values", type=_floats)
    p.add_argument("--gamma-values", dest="gamma_values", type=_floats)
    p.add_argument("--out", help="CSV report path")

    p = sub.add_parser("evaluate", help="confusion counts and accuracies on a dataset")
    p.add_argument("--config")
    p.add_argument("--model", required=True, dest="model_path")
    p.add_argument("--data")
    p.add_argument("--roc", help="also write the ROC curve TSV here")
    p.add_argument("--compare", help="second model file for an AUC z test")
    p.add_argument("--r", type=float, help="AUC correlation for --compare")

    p = sub.add_parser("sensitivity", help="variable-influence reports for a model")
    p.add_argument("--config")
    p.add_argument("--model", required=True, dest="model_path")
    p.add_argument("--data", help="test dataset (raw)")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--ranking", action="store_true", help="also rank single variables")
    p.add_argument("--train", dest="train_path", help="training dataset for --ranking")

    p = sub.add_parser("pipeline", help="full protocol run into an output directory")
    p.add_argument("--config")
    p.add_argument("--data")
    p.add_argument("--classes", type=int, help="training records per class")
    p.add_argument("--seed", type=int)
    p.add_argument("--k", type=int)
    p.add_argument("--c-values", dest="c_values", type=_floats)
    p.add_argument("--gamma-values", dest="gamma_values", type=_floats)
    p.add_argument("--hidden", type=int)
    p.add_argument("--cycles", type=int)
    p.add_argument("--r", type=float)
    p.add_argument("--out", required=True)
    return parser


def cmd_synth(args, config) -> int:
    ds = generate_synthetic(
        _resolve(args, config, "peace", int, 100),
        _resolve(args, config, "conflict", int, 100),
        _resolve(args, config, "separation", float, 2.0),
        _resolve(args, config, "seed", int, 0),
    )
    write_dataset(ds, args.out)
    print(f"wrote {len(ds)} records to {args.out}")
    return EXIT_OK


def cmd_train(args, config) -> int:
    family = _resolve(args, config, "model", str, None)
    data_path = _resolve(args, config, "data", str, None)
    if family not in (MLP, SVM) or not data_path:
        print("train: --model {mlp,svm} and --data are required", file=sys.stderr)
        return EXIT_USAGE
    seed = _resolve(args, config, "seed", int, 0)
    raw = load_dataset(data_path)
    scaler = DyadScaler().fit_dataset(raw)
    train = scaler.transform_dataset(raw)
    X = train.features()
    if family == SVM:
        est = SvmClassifier(
            C=_resolve(args, config, "c", float, 1.0),
            kernel=_resolve(args, config, "kernel", str, "rbf"),
            gamma=_resolve(args, config, "gamma", float, 16.75),
            kkt_tol=_resolve(args, config, "kkt_tol", float, 1e-3),
            max_passes=_resolve(args, config, "max_passes", int, 100_000),
            random_state=seed,
        ).fit(X, train.targets_pm())
        summary = [
            f"support vectors: {len(est.support_)}",
            f"dual objective: {est.dual_objective_:.6f}",
            f"kkt violation: {est.kkt_violation_:.3e}",
        ]
    else:
        est = MlpClassifier(
            n_hidden=_resolve(args, config, "hidden", int, 10),
            cycles=_resolve(args, config, "cycles", int, 100),
            random_state=seed,
        ).fit(X, train.targets01())
        summary = [
            f"optimizer iterations: {est.n_iter_}",
            f"final loss: {est.loss_curve_[-1]:.6f}",
            "loss trace: " + " ".join(f"{v:.4f}" for v in est.loss_curve_),
        ]
    bundle = ModelBundle(family, est, scaler, seed)
    save_model(bundle, args.out)
    predicted = bundle.predict_labels(raw)
    cm = confusion(predicted, raw.labels())
    print(f"trained {family} on {len(raw)} records (seed {seed})")
    for line in summary:
        print(line)
    print(f"training accuracy: {cm.accuracy:.4f}")
    print(f"model written to {args.out}")
    return EXIT_OK


def cmd_grid_search(args, config) -> int:
    data_path = _resolve(args, config, "data", str, None)
    if not data_path:
        print("grid-search: --data is required", file=sys.stderr)
        return EXIT_USAGE
    seed = _resolve(args, config, "seed", int, 0)
    raw = load_dataset(data_path)
    scaler = DyadScaler().fit_dataset(raw)
    train = scaler.transform_dataset(raw)
    grid = GridSpec(
        c_values=_resolve(args, config, "c_values", _floats, DEFAULT_GRID.c_values),
        gamma_values=_resolve(args, config, "gamma_values", _floats, DEFAULT_GRID.gamma_values),
        k=_resolve(args, config, "k", int, 10),
        seed=seed,
    )
    result = grid_search(train, grid)
    best = result.best_cell()
    print(
        f"best cell: C={result.best_c:g} gamma={result.best_gamma:g} "
        f"mean_accuracy={best.mean_accuracy:.4f}"
    )
    out = _resolve(args, config, "out", str, None)
    if out:
        write_cv_report(result, out, _provenance(seed, data_path))
        print(f"report written to {out}")
    return EXIT_OK


def cmd_evaluate(args, config) -> int:
    data_path = _resolve(args, config, "data", str, None)
    if not data_path:
        print("evaluate: --data is required", file=sys.stderr)
        return EXIT_USAGE
    bundle = load_model(args.model_path)
    raw = load_dataset(data_path)
    actual = raw.labels()
    predicted = bundle.predict_labels(raw)
    cm = confusion(predicted, actual)
    print(confusion_report(cm, bundle.family))
    if args.roc or args.compare:
        scores = bundle.conflict_scores(raw)
        curve = roc_points(scores, actual)
        a = auc(curve)
        se = _safe_se(a, curve.n_conflict, curve.n_peace)
        print(f"  AUC:                 {a:.6f}")
        print(f"  AUC standard error:  {_se_text(se)}")
        if args.roc:
            write_roc_tsv(curve, args.roc, _provenance(bundle.seed, data_path))
            print(f"ROC written to {args.roc}")
        if args.compare:
            other = load_model(args.compare)
            other_scores = other.conflict_scores(raw)
            other_curve = roc_points(other_scores, actual)
            a2 = auc(other_curve)
            se2 = _safe_se(a2, other_curve.n_conflict, other_curve.n_peace)
            if se is None or se2 is None:
                print("AUC comparison undefined: degenerate AUC (0 or 1) on this data")
            else:
                r = args.r
                if r is None:
                    r = score_correlation(scores, other_scores, actual)
                    print(f"r estimated from paired scores: {r:.6f}")
                print(comparison_report(Path(args.model_path).name, a, se,
                                        Path(args.compare).name, a2, se2, r))
    return EXIT_OK


def cmd_sensitivity(args, config) -> int:
    data_path = _resolve(args, config, "data", str, None)
    if not data_path:
        print("sensitivity: --data is required", file=sys.stderr)
        return EXIT_USAGE
    bundle = load_model(args.model_path)
    raw = load_dataset(data_path)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    header = _provenance(bundle.seed, data_path)

    predictions = run_extreme_profiles(bundle)
    write_profiles_csv(predictions, out / "profiles.csv", header)
    report = perturbation_report(bundle, raw)
    write_perturbation_csv(report, out / "perturbation.csv", header)
    print(perturbation_text(report))
    if args.ranking:
        if not args.train_path:
            print("sensitivity: --ranking requires --train", file=sys.stderr)
            return EXIT_USAGE
        train_raw = load_dataset(args.train_path)
        train = bundle.scaler.transform_dataset(train_raw)
        test = bundle.scaler.transform_dataset(raw)
        est = bundle.estimator
        if bundle.family == SVM:
            trainer = lambda X, y01: SvmClassifier(**est.get_params()).fit(
                X, np.where(y01 > 0, 1.0, -1.0)
            )
        else:
            trainer = lambda X, y01: MlpClassifier(**est.get_params()).fit(X, y01)
        table = single_variable_ranking(trainer, train, test)
        write_ranking_csv(table, out / "ranking.csv", header)
        print(ranking_text(table))
    print(f"reports written to {out}")
    return EXIT_OK


def cmd_pipeline(args, config) -> int:
    data_path = _resolve(args, config, "data", str, None)
    if not data_path:
        print("pipeline: --data is required", file=sys.stderr)
        return EXIT_USAGE
    cfg = PipelineConfig(
        data_path=Path(data_path),
        out_dir=Path(args.out),
        n_per_class=_resolve(args, config, "classes", int, 500),
        seed=_resolve(args, config, "seed", int, 0),
        k=_resolve(args, config, "k", int, 10),
        c_values=_resolve(args, config, "c_values", _floats, DEFAULT_GRID.c_values),
        gamma_values=_resolve(args, config, "gamma_values", _floats, DEFAULT_GRID.gamma_values),
        n_hidden=_resolve(args, config, "hidden", int, 10),
        cycles=_resolve(args, config, "cycles", int, 100),
        r=_resolve(args, config, "r", float, None),
    )
    outcome = run_pipeline(cfg)
    for entry in outcome.manifest["stages"]:
        status = entry["status"]
        suffix = f": {entry['error']}" if status == "failed" else ""
        print(f"stage {entry['name']}: {status}{suffix}")
    print(f"manifest written to {Path(args.out) / 'manifest.json'}")
    if outcome.error is not None:
        raise outcome.error
    return EXIT_OK


_COMMANDS = {
    "synth": cmd_synth,
    "train": cmd_train,
    "grid-search": cmd_grid_search,
    "evaluate": cmd_evaluate,
    "sensitivity": cmd_sensitivity,
    "pipeline": cmd_pipeline,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = _read_config(getattr(args, "config", None))
        return _COMMANDS[args.command](args, config)
    except FileNotFoundError as exc:
        print(f"error: file not found: {exc.filename or exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ValidationError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConvergenceError, TrainingError, MidpredictError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
