"""Classifier evaluation: confusion counts, ROC curves, AUC statistics.

The confusion vocabulary treats conflict as the event of interest:

    tc  true conflict   (conflict predicted, conflict observed)
    fp  false peace     (peace predicted, conflict observed)
    tp  true peace      (peace predicted, peace observed)
    fc  false conflict  (conflict predicted, peace observed)
"""

from __future__ import annotations

import io
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.stats import spearmanr

from ._util import ValidationError, fmt
from .data import CONFLICT, LABELS, PEACE


@dataclass(frozen=True)
class ConfusionMatrix:
    tc: int
    fp: int
    tp: int
    fc: int

    def __post_init__(self):
        if min(self.tc, self.fp, self.tp, self.fc) < 0:
            raise ValueError("counts must be non-negative")

    @property
    def total(self) -> int:
        return self.tc + self.fp + self.tp + self.fc

    @property
    def conflict_accuracy(self) -> float:
        return self.tc / (self.tc + self.fp)

    @property
    def peace_accuracy(self) -> float:
        return self.tp / (self.tp + self.fc)

    @property
    def accuracy(self) -> float:
        return (self.tc + self.tp) / self.total


def confusion(predicted, actual) -> ConfusionMatrix:
    """Count the four outcomes from peace/conflict label sequences."""
    predicted = list(predicted)
    actual = list(actual)
    if len(predicted) != len(actual):
        raise ValueError("predicted and actual lengths differ")
    if not predicted:
        raise ValueError("empty inputs")
    for lab in predicted + actual:
        if lab not in LABELS:
            raise ValueError(f"label {lab!r} not in {LABELS}")
    tc = fp = tp = fc = 0
    for p, a in zip(predicted, actual):
        if a == CONFLICT:
            if p == CONFLICT:
                tc += 1
            else:
                fp += 1
        else:
            if p == PEACE:
                tp += 1
            else:
                fc += 1
    return ConfusionMatrix(tc, fp, tp, fc)


@dataclass(frozen=True)
class RocCurve:
    """Operating points swept over the distinct observed scores.

    fpr is 1 - specificity, tpr is sensitivity. The integer count arrays
    behind the rates are kept so the area can be computed without rounding
    slack: tc_counts[i] conflicts and fc_counts[i] peaces have scores at or
    above thresholds[i].
    """

    thresholds: np.ndarray
    fpr: np.ndarray
    tpr: np.ndarray
    tc_counts: np.ndarray
    fc_counts: np.ndarray
    n_conflict: int
    n_peace: int

    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.fpr.tolist(), self.tpr.tolist()))


def roc_points(scores, actual) -> RocCurve:
    """ROC curve for scores where larger means more conflict-like.

    One point per distinct score (tied scores collapse into a single step),
    preceded by the forced (0, 0) endpoint at an infinite threshold. The
    final point is always (1, 1).
    """
    scores = np.asarray(scores, dtype=float).ravel()
    actual = list(actual)
    if len(scores) != len(actual):
        raise ValueError("scores and labels length mismatch")
    if not np.isfinite(scores).all():
        raise ValueError("scores must be finite")
    is_conflict = np.array([lab == CONFLICT for lab in actual])
    n_c = int(is_conflict.sum())
    n_p = len(actual) - n_c
    if n_c == 0 or n_p == 0:
        raise ValidationError("both classes are required for a ROC curve")

    order = np.argsort(-scores, kind="stable")
    sorted_scores = scores[order]
    sorted_conflict = is_conflict[order]
    distinct = np.flatnonzero(np.diff(sorted_scores, append=-np.inf))  # last index of each tie run
    cum_tc = np.cumsum(sorted_conflict)[distinct]
    cum_fc = (distinct + 1) - cum_tc

    thresholds = np.concatenate([[np.inf], sorted_scores[distinct]])
    tc_counts = np.concatenate([[0], cum_tc])
    fc_counts = np.concatenate([[0], cum_fc])
    return RocCurve(
        thresholds=thresholds,
        fpr=fc_counts / n_p,
        tpr=tc_counts / n_c,
        tc_counts=tc_counts,
        fc_counts=fc_counts,
        n_conflict=n_c,
        n_peace=n_p,
    )


def auc(curve: RocCurve) -> float:
    """Trapezoidal area under the curve.

    Accumulated in integer counts and divided once, which makes the result
    identical to pairwise win counting with half credit for ties.
    """
    dfc = np.diff(curve.fc_counts)
    heights = curve.tc_counts[1:] + curve.tc_counts[:-1]
    numerator = float(np.sum(dfc * heights))
    return numerator / (2.0 * curve.n_conflict * curve.n_peace)


def auc_standard_error(a: float, n_conflict: int, n_peace: int) -> float:
    """Closed-form standard error of a trapezoidal AUC (Hanley-McNeil form).

    Uses the exponential-model quantities q1 = a/(2-a) and q2 = 2a^2/(1+a).
    """
    if not 0.0 < a < 1.0:
        raise ValidationError(
            f"AUC {a} has zero-variance standard error; need 0 < AUC < 1"
        )
    if n_conflict < 1 or n_peace < 1:
        raise ValueError("both class counts must be >= 1")
    q1 = a / (2.0 - a)
    q2 = 2.0 * a * a / (1.0 + a)
    var = (
        a * (1.0 - a)
        + (n_conflict - 1) * (q1 - a * a)
        + (n_peace - 1) * (q2 - a * a)
    ) / (n_conflict * n_peace)
    return float(np.sqrt(var))


def auc_z_test(a1: float, se1: float, a2: float, se2: float, r: float) -> float:
    """Normal z statistic for two correlated AUCs measured on the same cases.

    z = (a1 - a2) / sqrt(se1^2 + se2^2 - 2 r se1 se2); |z| > 1.96 marks a
    significant difference at the 95% level.
    """
    if se1 <= 0 or se2 <= 0:
        raise ValueError("standard errors must be positive")
    if not -1.0 <= r <= 1.0:
        raise ValueError("correlation r must lie in [-1, 1]")
    var = se1 * se1 + se2 * se2 - 2.0 * r * se1 * se2
    if var <= 0:
        raise ValueError(f"non-positive variance {var} under the square root")
    return float((a1 - a2) / np.sqrt(var))


@dataclass(frozen=True)
class AucComparison:
    """Two AUCs with their standard errors, assumed correlation and z."""

    a1: float
    a2: float
    se1: float
    se2: float
    r: float
    z: float

    @property
    def significant_95(self) -> bool:
        return abs(self.z) > 1.96


def compare_aucs(a1: float, se1: float, a2: float, se2: float, r: float) -> AucComparison:
    return AucComparison(a1=a1, a2=a2, se1=se1, se2=se2, r=r, z=auc_z_test(a1, se1, a2, se2, r))


def score_correlation(scores1, scores2, actual) -> float:
    """Average within-class rank correlation of two score vectors.

    This is the paired-score correlation feeding the z test; it is used
    directly as the r estimate. Callers with a better externally derived r
    should pass that instead.
    """
    scores1 = np.asarray(scores1, dtype=float).ravel()
    scores2 = np.asarray(scores2, dtype=float).ravel()
    actual = list(actual)
    if not len(scores1) == len(scores2) == len(actual):
        raise ValueError("inputs must have matching lengths")
    is_conflict = np.array([lab == CONFLICT for lab in actual])
    if is_conflict.all() or not is_conflict.any():
        raise ValidationError("both classes are required")
    rs = []
    for mask in (is_conflict, ~is_conflict):
        if mask.sum() < 2:
            continue
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")  # constant scores yield nan, handled below
            rho = spearmanr(scores1[mask], scores2[mask]).statistic
        if np.isfinite(rho):
            rs.append(float(rho))
    if not rs:
        raise ValidationError("per-class correlations are undefined (constant scores)")
    return float(np.mean(rs))


def write_roc_tsv(curve: RocCurve, path: str | Path, header_lines: list[str] | None = None) -> None:
    buf = io.StringIO()
    for line in header_lines or []:
        buf.write(f"# {line}\n")
    buf.write("threshold\tfpr\tsensitivity\n")
    for t, x, y in zip(curve.thresholds, curve.fpr, curve.tpr):
        buf.write(f"{fmt(t)}\t{fmt(x)}\t{fmt(y)}\n")
    Path(path).write_text(buf.getvalue(), encoding="utf-8", newline="")


def confusion_report(cm: ConfusionMatrix, name: str = "") -> str:
    title = f"classification results{f' ({name})' if name else ''}"
    return "\n".join(
        [
            title,
            f"  TC (true conflict):  {cm.tc}",
            f"  FP (false peace):    {cm.fp}",
            f"  TP (true peace):     {cm.tp}",
            f"  FC (false conflict): {cm.fc}",
            f"  conflict accuracy:   {cm.conflict_accuracy:.4f}",
            f"  peace accuracy:      {cm.peace_accuracy:.4f}",
            f"  overall accuracy:    {cm.accuracy:.4f}",
        ]
    )


def comparison_report(
    name1: str, a1: float, se1: float, name2: str, a2: float, se2: float, r: float
) -> str:
    cmp = compare_aucs(a1, se1, a2, se2, r)
    verdict = "yes" if cmp.significant_95 else "no"
    return "\n".join(
        [
            "AUC comparison",
            f"  {name1}: AUC={cmp.a1:.6f} SE={cmp.se1:.6f}",
            f"  {name2}: AUC={cmp.a2:.6f} SE={cmp.se2:.6f}",
            f"  r: {cmp.r:.6f}",
            f"  z: {cmp.z:.6f}",
            f"  significant at 95% (|z| > 1.96): {verdict}",
        ]
    )
