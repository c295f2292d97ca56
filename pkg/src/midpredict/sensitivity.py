"""Variable-influence probes for a trained conflict model.

Three complementary views:

  * extreme profiles: the model's verdict when one variable sits at one
    end of its range and every other variable sits at the opposite end;
  * perturbation counts: predictions over the whole test set after forcing
    one variable to an extreme for every record, next to the unmodified
    baseline;
  * single-variable ranking: retrain on one variable at a time and rank
    the variables by held-out AUC.

Extremes are the canonical bounds for democracy and the binaries and the
training-data bounds for the rest; probe vectors are built in raw variable
space and pushed through the model's own scaler.
"""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from ._util import ValidationError, fmt
from .bundle import ModelBundle
from .data import CONFLICT, PEACE, Dataset
from .evaluation import auc, roc_points
from .variables import N_VARIABLES, VARIABLE_NAMES, variable_index

MAX = "max"
MIN = "min"

BASELINE = "baseline"


@dataclass(frozen=True)
class ExtremeProfile:
    variable: str
    direction: str  # the probed variable sits at this end; the rest oppose it
    values: tuple[float, ...]


@dataclass(frozen=True)
class ProfilePrediction:
    profile: ExtremeProfile
    label: str
    score: float


@dataclass(frozen=True)
class PerturbationRow:
    variable: str  # BASELINE for the unmodified row
    direction: str | None
    n_peace: int
    n_conflict: int


@dataclass(frozen=True)
class PerturbationReport:
    rows: tuple[PerturbationRow, ...]
    n_records: int


@dataclass(frozen=True)
class RankingRow:
    rank: int | None  # None when training failed for this variable
    variable: str
    auc: float
    note: str = ""


@dataclass(frozen=True)
class RankingTable:
    rows: tuple[RankingRow, ...]


def extreme_profiles(bounds: dict[str, tuple[float, float]]) -> tuple[ExtremeProfile, ...]:
    """All 14 one-variable-against-the-rest probe vectors (raw space)."""
    if set(bounds) != set(VARIABLE_NAMES):
        raise ValueError("bounds must cover exactly the seven variables")
    profiles = []
    for direction in (MAX, MIN):
        probe_end = 1 if direction == MAX else 0
        for name in VARIABLE_NAMES:
            vec = [bounds[v][1 - probe_end] for v in VARIABLE_NAMES]
            vec[variable_index(name)] = bounds[name][probe_end]
            profiles.append(ExtremeProfile(name, direction, tuple(vec)))
    return tuple(profiles)


def run_extreme_profiles(bundle: ModelBundle) -> tuple[ProfilePrediction, ...]:
    """Model verdict and score for each of the 14 extreme profiles."""
    profiles = extreme_profiles(bundle.scaler.bounds())
    raw = np.array([p.values for p in profiles])
    X = bundle.scaler.transform(raw)
    scores = bundle.estimator.conflict_score(X)
    flags = bundle.predict_matrix(X)
    return tuple(
        ProfilePrediction(p, CONFLICT if f else PEACE, float(s))
        for p, f, s in zip(profiles, flags, scores)
    )


def perturbation_report(bundle: ModelBundle, test: Dataset) -> PerturbationReport:
    """Prediction counts after forcing each variable to each extreme.

    Rows: the unmodified baseline, then min and max rows per variable in
    canonical order (15 rows). Every row's peace + conflict equals the
    test-set size. The test set must be in raw variable space.
    """
    if len(test) == 0:
        raise ValidationError("test set is empty")
    if test.normalized:
        raise ValidationError("perturbations are applied in raw space; pass raw data")
    raw = test.features()
    if raw.shape[1] != N_VARIABLES:
        raise ValueError(f"expected {N_VARIABLES} variables")
    bounds = bundle.scaler.bounds()

    def counts(matrix_raw) -> tuple[int, int]:
        flags = bundle.predict_matrix(bundle.scaler.transform(matrix_raw))
        n_conf = int(flags.sum())
        return len(flags) - n_conf, n_conf

    rows = [PerturbationRow(BASELINE, None, *counts(raw))]
    for name in VARIABLE_NAMES:
        j = variable_index(name)
        for direction, bound in ((MIN, bounds[name][0]), (MAX, bounds[name][1])):
            modified = raw.copy()
            modified[:, j] = bound
            rows.append(PerturbationRow(name, direction, *counts(modified)))
    return PerturbationReport(rows=tuple(rows), n_records=len(test))


Trainer = Callable[[np.ndarray, np.ndarray], object]


def single_variable_ranking(trainer: Trainer, train: Dataset, test: Dataset) -> RankingTable:
    """Rank variables by the test AUC of a model trained on each one alone.

    `trainer(X, y01)` must return an object with a conflict_score method.
    Both datasets must already be normalized. Variables whose training
    fails are excluded from the ranking and appended with the reason.
    """
    if not (train.normalized and test.normalized):
        raise ValidationError("train and test must be normalized")
    X_train = train.features()
    X_test = test.features()
    y_train = train.targets01()
    test_labels = test.labels()
    scored: list[tuple[str, float]] = []
    failed: list[tuple[str, str]] = []
    for name in VARIABLE_NAMES:
        j = variable_index(name)
        try:
            model = trainer(X_train[:, j : j + 1], y_train)
            scores = model.conflict_score(X_test[:, j : j + 1])
            value = auc(roc_points(scores, test_labels))
        except Exception as exc:  # noqa: BLE001 - any failure flags the variable
            failed.append((name, f"{type(exc).__name__}: {exc}"))
            continue
        scored.append((name, value))
    scored.sort(key=lambda item: (-item[1], variable_index(item[0])))
    rows = [RankingRow(rank, name, value) for rank, (name, value) in enumerate(scored, 1)]
    rows += [RankingRow(None, name, float("nan"), note=reason) for name, reason in failed]
    return RankingTable(rows=tuple(rows))


# Report writers -----------------------------------------------------------


def write_profiles_csv(
    predictions, path: str | Path, header_lines: list[str] | None = None
) -> None:
    buf = io.StringIO()
    for line in header_lines or []:
        buf.write(f"# {line}\n")
    buf.write("variable,direction,prediction,score," + ",".join(VARIABLE_NAMES) + "\n")
    for pp in predictions:
        vals = ",".join(fmt(v) for v in pp.profile.values)
        buf.write(
            f"{pp.profile.variable},{pp.profile.direction},{pp.label},{fmt(pp.score)},{vals}\n"
        )
    Path(path).write_text(buf.getvalue(), encoding="utf-8", newline="")


def perturbation_text(report: PerturbationReport) -> str:
    lines = [f"{'row':<18}{'peace':>10}{'conflict':>10}"]
    for row in report.rows:
        name = BASELINE if row.variable == BASELINE else f"{row.variable}-{row.direction}"
        lines.append(f"{name:<18}{row.n_peace:>10}{row.n_conflict:>10}")
    return "\n".join(lines)


def write_perturbation_csv(
    report: PerturbationReport, path: str | Path, header_lines: list[str] | None = None
) -> None:
    buf = io.StringIO()
    for line in header_lines or []:
        buf.write(f"# {line}\n")
    buf.write("variable,direction,peace,conflict\n")
    for row in report.rows:
        direction = row.direction or ""
        buf.write(f"{row.variable},{direction},{row.n_peace},{row.n_conflict}\n")
    Path(path).write_text(buf.getvalue(), encoding="utf-8", newline="")


def ranking_text(table: RankingTable) -> str:
    lines = [f"{'rank':<6}{'variable':<14}{'auc':>10}  note"]
    for row in table.rows:
        rank = "-" if row.rank is None else str(row.rank)
        value = "nan" if row.auc != row.auc else f"{row.auc:.4f}"
        lines.append(f"{rank:<6}{row.variable:<14}{value:>10}  {row.note}".rstrip())
    return "\n".join(lines)


def write_ranking_csv(
    table: RankingTable, path: str | Path, header_lines: list[str] | None = None
) -> None:
    buf = io.StringIO()
    for line in header_lines or []:
        buf.write(f"# {line}\n")
    buf.write("rank,variable,auc,note\n")
    for row in table.rows:
        rank = "" if row.rank is None else str(row.rank)
        value = "nan" if row.auc != row.auc else fmt(row.auc)
        buf.write(f"{rank},{row.variable},{value},{row.note}\n")
    Path(path).write_text(buf.getvalue(), encoding="utf-8", newline="")
