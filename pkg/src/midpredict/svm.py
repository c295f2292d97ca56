"""Soft-margin kernel SVM trained by sequential minimal optimization.

The solver maximizes the dual

    W(a) = sum_i a_i - 1/2 sum_ij a_i a_j y_i y_j k(x_i, x_j)
    s.t.  0 <= a_i <= C,  sum_i a_i y_i = 0

one analytically solved coordinate pair at a time, picking the maximal
first-order-violating pair each round and stopping when the violation gap
falls under `kkt_tol`. Every accepted pair update is an exact line search
restricted to the feasible box, so the dual objective never decreases.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_array, check_X_y

from ._util import STREAM_SVM, ConvergenceError, make_rng
from .kernels import KernelSpec, gram_matrix

# Above this training size the Gram matrix is no longer fully materialized;
# kernel rows are computed on demand instead.
GRAM_CACHE_LIMIT = 5000

# Curvature floor for degenerate pairs (identical points).
_TAU = 1e-12


@dataclass(frozen=True)
class SvmModel:
    """Fitted decision function: support vectors, dual weights and bias."""

    support_x: np.ndarray  # (n_sv, d)
    support_y: np.ndarray  # (n_sv,) in {-1, +1}
    alpha: np.ndarray      # (n_sv,) dual coefficients
    bias: float
    kernel: KernelSpec
    c: float
    support_idx: np.ndarray | None = None  # positions in the training set

    def decision(self, X) -> np.ndarray:
        """Pre-sign score sum_i y_i a_i k(x, x_i) + b for each row of X."""
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if len(self.alpha) == 0:
            return np.full(X.shape[0], self.bias)
        if X.shape[1] != self.support_x.shape[1]:
            raise ValueError(
                f"dimension mismatch: {X.shape[1]} features vs "
                f"{self.support_x.shape[1]} in support vectors"
            )
        K = gram_matrix(self.kernel, X, self.support_x)
        return K @ (self.alpha * self.support_y) + self.bias


@dataclass(frozen=True)
class SmoResult:
    alpha: np.ndarray
    bias: float
    n_iter: int
    gap: float
    objective: float
    objective_trace: np.ndarray | None = None


def _dual_objective(alpha, grad):
    # W(a) = sum(a) - 1/2 a'Qa, and grad = Qa - 1, so a'Qa = a'(grad + 1).
    return 0.5 * (alpha.sum() - alpha @ grad)


def smo_solve(
    X,
    y,
    kernel: KernelSpec,
    c: float,
    kkt_tol: float = 1e-3,
    max_passes: int = 100_000,
    seed: int = 0,
    track_objective: bool = False,
) -> SmoResult:
    """Solve the soft-margin dual; returns the full alpha vector and bias.

    Raises ValueError when y contains a single class (the equality
    constraint then forces alpha = 0) and ConvergenceError, carrying the
    residual violation, when `max_passes` pair updates do not reach
    `kkt_tol`.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim != 2 or len(X) != len(y):
        raise ValueError("X must be 2-D with one row per label")
    if not np.isfinite(X).all():
        raise ValueError("X contains non-finite values")
    if not set(np.unique(y)) <= {-1.0, 1.0}:
        raise ValueError("labels must be -1/+1")
    if (y > 0).all() or (y < 0).all():
        raise ValueError("both classes are required; single-class dual is degenerate")
    if c <= 0:
        raise ValueError("C must be positive")
    if kkt_tol <= 0 or max_passes < 1:
        raise ValueError("kkt_tol must be > 0 and max_passes >= 1")

    n = len(y)
    full_gram = n <= GRAM_CACHE_LIMIT
    K = gram_matrix(kernel, X) if full_gram else None

    def krow(i):
        if full_gram:
            return K[i]
        return gram_matrix(kernel, X[i : i + 1], X)[0]

    def kdiag():
        if full_gram:
            return np.diag(K).copy()
        if kernel.kind == "rbf":
            return np.ones(n)
        return np.einsum("ij,ij->i", X, X)

    diag = kdiag()
    alpha = np.zeros(n)
    grad = -np.ones(n)  # gradient of 1/2 a'Qa - sum(a)
    atol = 1e-10 * max(1.0, c)
    # Exact gradient refresh is cheap on small problems and removes the
    # drift of incremental updates; larger problems refresh periodically.
    refresh_every = 1 if n <= 64 else 5000
    tie_rank = make_rng(seed, STREAM_SVM).permutation(n)
    trace = [] if track_objective else None

    def refresh_grad():
        nonlocal grad
        coef = alpha * y
        if full_gram:
            grad = y * (K @ coef) - 1.0
            return
        # Blockwise so the uncached path never materializes an n x n matrix.
        acc = np.empty(n)
        step = 1024
        for start in range(0, n, step):
            rows = gram_matrix(kernel, X[start : start + step], X)
            acc[start : start + step] = rows @ coef
        grad = y * acc - 1.0

    gap = np.inf
    it = 0
    for it in range(1, max_passes + 1):
        if refresh_every == 1 or it % refresh_every == 0:
            refresh_grad()
        # First-order violation scores: f_t = y_t - sum_s a_s y_s k(t, s).
        f = -y * grad
        movable_up = np.where(y > 0, alpha < c - atol, alpha > atol)
        movable_dn = np.where(y > 0, alpha > atol, alpha < c - atol)
        up_vals = np.where(movable_up, f, -np.inf)
        dn_vals = np.where(movable_dn, f, np.inf)
        m_up = up_vals.max()
        m_dn = dn_vals.min()
        gap = m_up - m_dn
        if gap <= kkt_tol:
            break
        cand_i = np.flatnonzero(up_vals == m_up)
        cand_j = np.flatnonzero(dn_vals == m_dn)
        i = int(cand_i[np.argmin(tie_rank[cand_i])])
        j = int(cand_j[np.argmin(tie_rank[cand_j])])

        ki = krow(i)
        kj = krow(j)
        eta = max(diag[i] + diag[j] - 2.0 * ki[j], _TAU)
        # Feasible move: a_i += y_i * lam, a_j -= y_j * lam with lam > 0.
        room_i = c - alpha[i] if y[i] > 0 else alpha[i]
        room_j = alpha[j] if y[j] > 0 else c - alpha[j]
        lam = min(gap / eta, room_i, room_j)
        dai = y[i] * lam
        daj = -y[j] * lam
        alpha[i] = min(max(alpha[i] + dai, 0.0), c)
        alpha[j] = min(max(alpha[j] + daj, 0.0), c)
        grad += y * (ki * (y[i] * dai) + kj * (y[j] * daj))
        if trace is not None:
            trace.append(_dual_objective(alpha, grad))
    else:
        refresh_grad()
        f = -y * grad
        up_vals = np.where(np.where(y > 0, alpha < c - atol, alpha > atol), f, -np.inf)
        dn_vals = np.where(np.where(y > 0, alpha > atol, alpha < c - atol), f, np.inf)
        gap = up_vals.max() - dn_vals.min()
        raise ConvergenceError(
            f"SMO did not reach tolerance {kkt_tol:g} within {max_passes} pair "
            f"updates; residual violation {gap:.6g}",
            residual=float(gap),
        )

    refresh_grad()
    scores = y * (grad + 1.0)  # sum_s a_s y_s k(t, s) for every t
    bias = _solve_bias(alpha, y, scores, c, atol)
    objective = _dual_objective(alpha, grad)
    return SmoResult(
        alpha=alpha,
        bias=float(bias),
        n_iter=it,
        gap=float(gap),
        objective=float(objective),
        objective_trace=None if trace is None else np.asarray(trace),
    )


def _solve_bias(alpha, y, scores, c, atol):
    """Bias from free support vectors, else midpoint of the feasible interval."""
    resid = y - scores  # the value b must match (free) or bound (at 0 / C)
    free = (alpha > atol) & (alpha < c - atol)
    if free.any():
        return float(resid[free].mean())
    lower = ((alpha <= atol) & (y > 0)) | ((alpha >= c - atol) & (y < 0))
    upper = ((alpha <= atol) & (y < 0)) | ((alpha >= c - atol) & (y > 0))
    lo = resid[lower].max() if lower.any() else None
    hi = resid[upper].min() if upper.any() else None
    if lo is None and hi is None:
        return 0.0
    if lo is None:
        return float(hi)
    if hi is None:
        return float(lo)
    return float((lo + hi) / 2.0)


def kkt_residuals(margins, alpha, c) -> np.ndarray:
    """Per-point violation of the soft-margin optimality conditions.

    margins[i] must be y_i * f(x_i). Points with alpha = 0 require a margin
    of at least 1, points at the box ceiling a margin of at most 1, and
    interior points a margin of exactly 1.
    """
    margins = np.asarray(margins, dtype=float)
    alpha = np.asarray(alpha, dtype=float)
    if margins.shape != alpha.shape:
        raise ValueError("margins and alpha must have matching shapes")
    atol = 1e-10 * max(1.0, c)
    at_zero = alpha <= atol
    at_c = alpha >= c - atol
    res = np.abs(margins - 1.0)
    res[at_zero] = np.maximum(0.0, 1.0 - margins[at_zero])
    res[at_c] = np.maximum(0.0, margins[at_c] - 1.0)
    return res


def kkt_violation(model: SvmModel, X, y) -> float:
    """Maximum KKT residual of `model` over its own training data.

    When the model carries support indices, alpha is reassembled over the
    full training set (dropped points have alpha 0); hand-built models
    without indices must cover every row of X.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if len(X) != len(y):
        raise ValueError("X and y length mismatch")
    if model.support_idx is not None:
        alpha = np.zeros(len(y))
        alpha[model.support_idx] = model.alpha
    else:
        if len(model.alpha) != len(y):
            raise ValueError(
                "model has no support indices; alpha must cover all training rows"
            )
        alpha = np.asarray(model.alpha, dtype=float)
    margins = y * model.decision(X)
    return float(kkt_residuals(margins, alpha, model.c).max(initial=0.0))


class SvmClassifier(BaseEstimator, ClassifierMixin):
    """Binary SVM with the interface conventions of scikit-learn.

    Labels are -1 (peace) and +1 (conflict). `decision_function` returns the
    margin score; `predict` maps score >= 0 to +1.

    Parameters
    ----------
    C : float
        Box constraint on the dual coefficients.
    kernel : str
        'rbf' or 'linear'.
    gamma : float
        RBF width; ignored for the linear kernel.
    kkt_tol : float
        Stopping tolerance on the maximal first-order violation.
    max_passes : int
        Pair-update budget before ConvergenceError.
    random_state : int
        Seed for tie-breaking in working-pair selection.
    """

    def __init__(
        self,
        C: float = 1.0,
        kernel: str = "rbf",
        gamma: float = 16.75,
        kkt_tol: float = 1e-3,
        max_passes: int = 100_000,
        random_state: int = 0,
    ):
        self.C = C
        self.kernel = kernel
        self.gamma = gamma
        self.kkt_tol = kkt_tol
        self.max_passes = max_passes
        self.random_state = random_state

    def _kernel_spec(self) -> KernelSpec:
        if self.kernel == "rbf":
            return KernelSpec("rbf", self.gamma)
        return KernelSpec(self.kernel)

    def fit(self, X, y):
        X, y = check_X_y(np.asarray(X, dtype=float), np.asarray(y, dtype=float))
        spec = self._kernel_spec()
        result = smo_solve(
            X,
            y,
            spec,
            self.C,
            kkt_tol=self.kkt_tol,
            max_passes=self.max_passes,
            seed=self.random_state,
        )
        sv = np.flatnonzero(result.alpha > 0.0)
        self.model_ = SvmModel(
            support_x=X[sv].copy(),
            support_y=y[sv].copy(),
            alpha=result.alpha[sv].copy(),
            bias=result.bias,
            kernel=spec,
            c=self.C,
            support_idx=sv,
        )
        self.classes_ = np.array([-1.0, 1.0])
        self.support_ = sv
        self.support_vectors_ = self.model_.support_x
        self.dual_coef_ = (self.model_.alpha * self.model_.support_y)[None, :]
        self.intercept_ = np.array([result.bias])
        self.n_iter_ = result.n_iter
        self.dual_objective_ = result.objective
        self.dual_gap_ = result.gap
        self.kkt_violation_ = kkt_violation(self.model_, X, y)
        return self

    def _check_fitted(self):
        if not hasattr(self, "model_"):
            raise NotFittedError("SvmClassifier is not fitted")

    def decision_function(self, X) -> np.ndarray:
        self._check_fitted()
        X = check_array(np.asarray(X, dtype=float))
        return self.model_.decision(X)

    def conflict_score(self, X) -> np.ndarray:
        """Score that increases with conflict likelihood (the margin)."""
        return self.decision_function(X)

    def predict(self, X) -> np.ndarray:
        return np.where(self.decision_function(X) >= 0.0, 1.0, -1.0)
