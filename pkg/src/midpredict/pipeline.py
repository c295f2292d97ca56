"""End-to-end protocol run: sample, normalize, select, train, evaluate, probe.

Every artifact lands in one output directory and is listed in a manifest
with its content digest. All randomness derives from the single run seed,
so two runs over the same input are byte-identical.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from ._util import file_digest
from .bundle import MLP, SVM, ModelBundle
from .data import balanced_sample, load_dataset, write_dataset
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
from .scaling import DyadScaler
from .sensitivity import (
    perturbation_report,
    run_extreme_profiles,
    single_variable_ranking,
    write_perturbation_csv,
    write_profiles_csv,
    write_ranking_csv,
)
from .serialize import save_model
from .svm import SvmClassifier


@dataclass
class PipelineConfig:
    data_path: Path
    out_dir: Path
    n_per_class: int = 500
    seed: int = 0
    k: int = 10
    c_values: tuple[float, ...] = DEFAULT_GRID.c_values
    gamma_values: tuple[float, ...] = DEFAULT_GRID.gamma_values
    n_hidden: int = 10
    cycles: int = 100
    kkt_tol: float = 1e-3
    max_passes: int = 100_000
    r: float | None = None  # AUC correlation; estimated from scores when None


@dataclass
class PipelineOutcome:
    manifest: dict
    failed_stage: str | None = None
    error: Exception | None = None


def run_pipeline(cfg: PipelineConfig) -> PipelineOutcome:
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    digest = file_digest(cfg.data_path)
    header = [
        f"tool_version: {__version__}",
        f"seed: {cfg.seed}",
        f"input_sha256: {digest}",
    ]
    manifest: dict = {
        "tool_version": __version__,
        "seed": cfg.seed,
        "input": str(Path(cfg.data_path).name),
        "input_sha256": digest,
        "stages": [],
        "artifacts": [],
    }
    artifacts: list[Path] = []
    state: dict = {}

    def artifact(name: str):
        artifacts.append(out / name)

    def stage(name: str):
        def wrap(fn):
            return (name, fn)

        return wrap

    @stage("load")
    def _load():
        state["raw"] = load_dataset(cfg.data_path)

    @stage("split")
    def _split():
        train_raw, test_raw = balanced_sample(state["raw"], cfg.n_per_class, cfg.seed)
        state["train_raw"], state["test_raw"] = train_raw, test_raw
        write_dataset(train_raw, out / "train.csv")
        write_dataset(test_raw, out / "test.csv")
        artifact("train.csv")
        artifact("test.csv")

    @stage("normalize")
    def _normalize():
        scaler = DyadScaler().fit_dataset(state["train_raw"])
        state["scaler"] = scaler
        state["train"] = scaler.transform_dataset(state["train_raw"])
        state["test"] = scaler.transform_dataset(state["test_raw"])

    @stage("grid_search")
    def _grid():
        grid = GridSpec(tuple(cfg.c_values), tuple(cfg.gamma_values), cfg.k, cfg.seed)
        result = grid_search(
            state["train"], grid, kkt_tol=cfg.kkt_tol, max_passes=cfg.max_passes
        )
        state["cv"] = result
        write_cv_report(result, out / "cv_table.csv", header)
        artifact("cv_table.csv")

    @stage("train_svm")
    def _train_svm():
        cv = state["cv"]
        est = SvmClassifier(
            C=cv.best_c,
            kernel="rbf",
            gamma=cv.best_gamma,
            kkt_tol=cfg.kkt_tol,
            max_passes=cfg.max_passes,
            random_state=cfg.seed,
        ).fit(state["train"].features(), state["train"].targets_pm())
        bundle = ModelBundle(SVM, est, state["scaler"], cfg.seed)
        state["svm"] = bundle
        save_model(bundle, out / "svm.model")
        artifact("svm.model")

    @stage("train_mlp")
    def _train_mlp():
        est = MlpClassifier(
            n_hidden=cfg.n_hidden, cycles=cfg.cycles, random_state=cfg.seed
        ).fit(state["train"].features(), state["train"].targets01())
        bundle = ModelBundle(MLP, est, state["scaler"], cfg.seed)
        state["mlp"] = bundle
        save_model(bundle, out / "mlp.model")
        artifact("mlp.model")

    @stage("evaluate")
    def _evaluate():
        test_raw = state["test_raw"]
        actual = test_raw.labels()
        for family in (SVM, MLP):
            bundle = state[family]
            predicted = bundle.predict_labels(test_raw)
            cm = confusion(predicted, actual)
            scores = bundle.conflict_scores(test_raw)
            curve = roc_points(scores, actual)
            a = auc(curve)
            se = (
                auc_standard_error(a, curve.n_conflict, curve.n_peace)
                if 0.0 < a < 1.0
                else None
            )
            se_text = "undefined (degenerate AUC)" if se is None else f"{se:.6f}"
            report = "\n".join(
                [f"# {line}" for line in header]
                + [
                    confusion_report(cm, family),
                    f"  AUC:                 {a:.6f}",
                    f"  AUC standard error:  {se_text}",
                ]
            )
            (out / f"evaluation_{family}.txt").write_text(report + "\n", encoding="utf-8")
            write_roc_tsv(curve, out / f"roc_{family}.tsv", header)
            artifact(f"evaluation_{family}.txt")
            artifact(f"roc_{family}.tsv")
            state[f"auc_{family}"] = (a, se)
            state[f"scores_{family}"] = scores

    @stage("compare")
    def _compare():
        a1, se1 = state[f"auc_{SVM}"]
        a2, se2 = state[f"auc_{MLP}"]
        actual = state["test_raw"].labels()
        if se1 is None or se2 is None:
            body = "AUC comparison undefined: degenerate AUC (0 or 1) on this data"
            text = "\n".join([f"# {line}" for line in header] + [body])
        else:
            if cfg.r is not None:
                r = cfg.r
                r_note = "r supplied by caller"
            else:
                r = score_correlation(state[f"scores_{SVM}"], state[f"scores_{MLP}"], actual)
                r_note = "r estimated from within-class rank correlation of paired scores"
            body = comparison_report("svm", a1, se1, "mlp", a2, se2, r)
            text = "\n".join([f"# {line}" for line in header] + [f"# {r_note}", body])
        (out / "comparison.txt").write_text(text + "\n", encoding="utf-8")
        artifact("comparison.txt")

    @stage("sensitivity")
    def _sensitivity():
        test_raw = state["test_raw"]
        cv = state["cv"]
        trainers = {
            SVM: lambda X, y01: SvmClassifier(
                C=cv.best_c,
                kernel="rbf",
                gamma=cv.best_gamma,
                kkt_tol=cfg.kkt_tol,
                max_passes=cfg.max_passes,
                random_state=cfg.seed,
            ).fit(X, np.where(y01 > 0, 1.0, -1.0)),
            MLP: lambda X, y01: MlpClassifier(
                n_hidden=cfg.n_hidden, cycles=cfg.cycles, random_state=cfg.seed
            ).fit(X, y01),
        }
        for family in (SVM, MLP):
            bundle = state[family]
            write_profiles_csv(
                run_extreme_profiles(bundle), out / f"profiles_{family}.csv", header
            )
            write_perturbation_csv(
                perturbation_report(bundle, test_raw),
                out / f"perturbation_{family}.csv",
                header,
            )
            table = single_variable_ranking(trainers[family], state["train"], state["test"])
            write_ranking_csv(table, out / f"ranking_{family}.csv", header)
            artifact(f"profiles_{family}.csv")
            artifact(f"perturbation_{family}.csv")
            artifact(f"ranking_{family}.csv")

    stages = [_load, _split, _normalize, _grid, _train_svm, _train_mlp, _evaluate, _compare, _sensitivity]

    failed: Exception | None = None
    failed_stage: str | None = None
    for name, fn in stages:
        try:
            fn()
        except Exception as exc:  # record the stage, then stop
            manifest["stages"].append({"name": name, "status": "failed", "error": str(exc)})
            failed = exc
            failed_stage = name
            break
        manifest["stages"].append({"name": name, "status": "ok"})

    manifest["artifacts"] = [
        {"name": p.name, "sha256": file_digest(p)} for p in sorted(artifacts)
    ]
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=1) + "\n", encoding="utf-8"
    )
    return PipelineOutcome(manifest=manifest, failed_stage=failed_stage, error=failed)
