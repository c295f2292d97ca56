"""Independent reference computations used to check the production code.

These deliberately avoid the code paths under test: the dual maximizer
enumerates active sets of the QP directly, and the AUC oracle counts
score pairs.
"""

from __future__ import annotations

import itertools

import numpy as np


def brute_force_dual_max(K: np.ndarray, y: np.ndarray, C: float) -> tuple[float, np.ndarray]:
    """Global maximum of sum(a) - 1/2 a'Qa over the box and equality constraint.

    Enumerates every assignment of each coordinate to {0, C, free} and solves
    the stationarity system on the free set. For positive semidefinite K the
    objective is concave, so the best feasible candidate over all active sets
    is the global optimum.
    """
    y = np.asarray(y, dtype=float)
    n = len(y)
    Q = np.outer(y, y) * K
    best_obj = -np.inf
    best_alpha = None
    for assignment in itertools.product((0, 1, 2), repeat=n):
        a = np.zeros(n)
        upper = [i for i, s in enumerate(assignment) if s == 1]
        free = [i for i, s in enumerate(assignment) if s == 2]
        a[upper] = C
        if free:
            qff = Q[np.ix_(free, free)]
            yf = y[free]
            rhs_top = np.ones(len(free))
            if upper:
                rhs_top = rhs_top - Q[np.ix_(free, upper)] @ a[upper]
            m = np.block([[qff, yf[:, None]], [yf[None, :], np.zeros((1, 1))]])
            rhs = np.concatenate([rhs_top, [-(a[upper] @ y[upper]) if upper else 0.0]])
            sol, *_ = np.linalg.lstsq(m, rhs, rcond=None)
            if not np.allclose(m @ sol, rhs, atol=1e-9 * max(1.0, C)):
                continue  # no stationary point on this face
            af = sol[: len(free)]
            if (af < -1e-9 * max(1.0, C)).any() or (af > C * (1 + 1e-9)).any():
                continue
            a[free] = np.clip(af, 0.0, C)
        if abs(a @ y) > 1e-8 * max(1.0, C):
            continue
        obj = a.sum() - 0.5 * a @ Q @ a
        if obj > best_obj:
            best_obj = obj
            best_alpha = a.copy()
    return float(best_obj), best_alpha


def pair_count_auc(scores, labels01) -> float:
    """Mann-Whitney AUC by explicit pair counting, ties worth one half."""
    scores = np.asarray(scores, dtype=float)
    labels01 = np.asarray(labels01)
    pos = scores[labels01 == 1]
    neg = scores[labels01 == 0]
    wins = 0
    ties = 0
    for sp in pos:
        for sn in neg:
            if sp > sn:
                wins += 1
            elif sp == sn:
                ties += 1
    return (2 * wins + ties) / (2.0 * len(pos) * len(neg))


def finite_difference_gradient(fun, w: np.ndarray, step: float = 1e-5) -> np.ndarray:
    """Central finite differences of a scalar function of a flat vector."""
    g = np.zeros_like(w)
    for k in range(w.size):
        e = np.zeros_like(w)
        e[k] = step
        g[k] = (fun(w + e) - fun(w - e)) / (2.0 * step)
    return g
