"""Stratified k-fold cross-validation and (C, gamma) grid search for the SVM."""

from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._util import STREAM_FOLDS, ConvergenceError, fmt, make_rng
from .data import CONFLICT, Dataset
from .svm import SvmClassifier


@dataclass(frozen=True)
class GridSpec:
    c_values: tuple[float, ...]
    gamma_values: tuple[float, ...]
    k: int = 10
    seed: int = 0

    def __post_init__(self):
        if self.k < 2:
            raise ValueError("k must be >= 2")
        for name, vals in (("c_values", self.c_values), ("gamma_values", self.gamma_values)):
            if not vals:
                raise ValueError(f"{name} must be nonempty")
            if any(v <= 0 for v in vals):
                raise ValueError(f"{name} must be positive")
            if any(a >= b for a, b in zip(vals, vals[1:])):
                raise ValueError(f"{name} must be strictly increasing")


# Powers of two spanning the island around the canonical operating point
# (C = 1, gamma = 16.75); override per run as needed.
DEFAULT_GRID = GridSpec(
    c_values=tuple(2.0**e for e in range(-2, 7)),
    gamma_values=tuple(2.0**e for e in range(-4, 7)),
)


@dataclass(frozen=True)
class CvCell:
    c: float
    gamma: float
    fold_accuracies: tuple[float, ...] | None
    mean_accuracy: float
    failed: bool = False
    reason: str | None = None


@dataclass(frozen=True)
class CvResult:
    cells: tuple[CvCell, ...]
    k: int
    seed: int
    best_c: float
    best_gamma: float

    def best_cell(self) -> CvCell:
        for cell in self.cells:
            if not cell.failed and cell.c == self.best_c and cell.gamma == self.best_gamma:
                return cell
        raise LookupError("best cell not found")


def kfold_indices(labels, k: int, seed: int) -> list[np.ndarray]:
    """Stratified fold index arrays, sizes within one of each other.

    Each class is shuffled once and dealt round-robin; the deal pointer
    carries across classes so total fold sizes stay balanced too.
    """
    labels = list(labels)
    n = len(labels)
    if k > n:
        raise ValueError(f"k={k} exceeds the {n} available records")
    if k < 2:
        raise ValueError("k must be >= 2")
    rng = make_rng(seed, STREAM_FOLDS)
    folds: list[list[int]] = [[] for _ in range(k)]
    pointer = 0
    for cls in (CONFLICT, "peace"):
        idx = np.array([i for i, lab in enumerate(labels) if lab == cls], dtype=int)
        rng.shuffle(idx)
        for i in idx:
            folds[pointer % k].append(int(i))
            pointer += 1
    return [np.array(sorted(f), dtype=int) for f in folds]


def kfold_split(ds: Dataset, k: int, seed: int) -> list[Dataset]:
    return [ds.subset(idx) for idx in kfold_indices(ds.labels(), k, seed)]


def cross_val_accuracy(
    ds: Dataset,
    c: float,
    gamma: float,
    k: int,
    seed: int,
    kkt_tol: float = 1e-3,
    max_passes: int = 100_000,
) -> tuple[float, ...]:
    """Held-out accuracy of an rbf SVM for each of the k fold rotations."""
    X = ds.features()
    y = ds.targets_pm()
    folds = kfold_indices(ds.labels(), k, seed)
    all_idx = np.arange(len(ds))
    accs = []
    for held_out in folds:
        mask = np.ones(len(ds), dtype=bool)
        mask[held_out] = False
        train_idx = all_idx[mask]
        clf = SvmClassifier(
            C=c,
            kernel="rbf",
            gamma=gamma,
            kkt_tol=kkt_tol,
            max_passes=max_passes,
            random_state=seed,
        ).fit(X[train_idx], y[train_idx])
        pred = clf.predict(X[held_out])
        accs.append(float(np.mean(pred == y[held_out])))
    return tuple(accs)


def grid_search(
    ds: Dataset,
    grid: GridSpec,
    kkt_tol: float = 1e-3,
    max_passes: int = 100_000,
) -> CvResult:
    """Mean cross-validated accuracy per (C, gamma) cell; argmax wins.

    Solver failures mark the cell failed (with the reason) and exclude it
    from selection. Ties break toward smaller C, then smaller gamma.
    """
    cells = []
    for c in grid.c_values:
        for gamma in grid.gamma_values:
            try:
                accs = cross_val_accuracy(
                    ds, c, gamma, grid.k, grid.seed, kkt_tol=kkt_tol, max_passes=max_passes
                )
            except (ValueError, ConvergenceError) as exc:
                cells.append(
                    CvCell(c, gamma, None, float("nan"), failed=True, reason=str(exc))
                )
                continue
            cells.append(CvCell(c, gamma, accs, float(np.mean(accs))))
    viable = [cell for cell in cells if not cell.failed]
    if not viable:
        raise ConvergenceError("every grid cell failed")
    best = min(viable, key=lambda cell: (-cell.mean_accuracy, cell.c, cell.gamma))
    return CvResult(
        cells=tuple(cells), k=grid.k, seed=grid.seed, best_c=best.c, best_gamma=best.gamma
    )


def write_cv_report(result: CvResult, path: str | Path, header_lines: list[str] | None = None) -> None:
    """CSV report: one row per cell plus a trailing best-cell summary line."""
    buf = io.StringIO()
    for line in header_lines or []:
        buf.write(f"# {line}\n")
    fold_cols = ",".join(f"fold_{i}" for i in range(1, result.k + 1))
    buf.write(f"C,gamma,{fold_cols},mean_accuracy\n")
    for cell in result.cells:
        if cell.failed:
            folds = ",".join(["failed"] * result.k)
            buf.write(f"{fmt(cell.c)},{fmt(cell.gamma)},{folds},failed\n")
        else:
            folds = ",".join(fmt(a) for a in cell.fold_accuracies)
            buf.write(f"{fmt(cell.c)},{fmt(cell.gamma)},{folds},{fmt(cell.mean_accuracy)}\n")
    best = result.best_cell()
    buf.write(
        f"# best: C={fmt(result.best_c)} gamma={fmt(result.best_gamma)} "
        f"mean_accuracy={fmt(best.mean_accuracy)}\n"
    )
    Path(path).write_text(buf.getvalue(), encoding="utf-8", newline="")
