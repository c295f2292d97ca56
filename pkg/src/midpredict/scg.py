"""Scaled conjugate gradient minimizer (Moller's algorithm).

A batch conjugate-gradient method that replaces the line search with a
one-sided finite-difference estimate of curvature along the search
direction, regulated by a Levenberg-Marquardt style scale that grows when
the local quadratic model is poor and shrinks when it is good. Steps are
only taken when they do not increase the objective, so the sequence of
accepted losses is non-increasing.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._util import TrainingError

_LAMBDA_MIN = 1e-15
_LAMBDA_MAX = 1e100


@dataclass(frozen=True)
class ScgResult:
    w: np.ndarray
    losses: tuple[float, ...]  # initial loss plus one entry per accepted step
    n_iter: int
    converged: bool


def scg_minimize(
    fun_grad: Callable[[np.ndarray], tuple[float, np.ndarray]],
    w0: np.ndarray,
    max_iter: int,
    sigma0: float = 1e-4,
    lambda0: float = 1e-6,
    grad_tol: float = 1e-10,
) -> ScgResult:
    """Minimize `fun_grad` (returning loss and gradient) from `w0`.

    Runs `max_iter` iterations, stopping early once the gradient norm drops
    under `grad_tol`. Raises TrainingError, naming the iteration, if the
    objective or gradient turns non-finite.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be >= 1")
    if sigma0 <= 0 or lambda0 <= 0 or grad_tol <= 0:
        raise ValueError("sigma0, lambda0 and grad_tol must be positive")

    w = np.asarray(w0, dtype=float).copy()
    n_params = w.size
    loss, grad = fun_grad(w)
    _check_finite(loss, grad, 0)
    r = -grad
    p = r.copy()
    lam = lambda0
    lam_bar = 0.0
    success = True
    steps_since_restart = 0
    losses = [float(loss)]

    delta = 0.0
    p_sq = 0.0
    it = 0
    converged = False
    for it in range(1, max_iter + 1):
        if float(np.linalg.norm(r)) < grad_tol:
            converged = True
            it -= 1
            break
        if success:
            mu = float(p @ r)
            if mu <= 0.0:
                # Conjugacy broke down; restart along the steepest descent.
                p = r.copy()
                mu = float(p @ r)
                steps_since_restart = 0
            p_sq = float(p @ p)
            sigma = sigma0 / np.sqrt(p_sq)
            _, grad_plus = fun_grad(w + sigma * p)
            _check_finite(0.0, grad_plus, it)
            delta = float(p @ (grad_plus - grad)) / sigma

        # Regulate curvature with the current scale.
        delta = delta + (lam - lam_bar) * p_sq
        if delta <= 0.0:
            lam_bar = 2.0 * (lam - delta / p_sq)
            delta = -delta + lam * p_sq
            lam = lam_bar

        mu = float(p @ r)
        step = mu / delta
        loss_new, grad_new = fun_grad(w + step * p)
        _check_finite(loss_new, grad_new, it)
        comparison = 2.0 * delta * (loss - loss_new) / (mu * mu)

        if comparison >= 0.0:
            w = w + step * p
            loss = loss_new
            grad = grad_new
            r_new = -grad_new
            lam_bar = 0.0
            success = True
            steps_since_restart += 1
            if steps_since_restart >= n_params:
                p = r_new.copy()
                steps_since_restart = 0
            else:
                beta = float(r_new @ r_new - r_new @ r) / mu
                p = r_new + beta * p
            r = r_new
            losses.append(float(loss))
            if comparison >= 0.75:
                lam = max(lam / 4.0, _LAMBDA_MIN)
        else:
            lam_bar = lam
            success = False

        if comparison < 0.25:
            lam = min(lam + delta * (1.0 - comparison) / p_sq, _LAMBDA_MAX)

    return ScgResult(w=w, losses=tuple(losses), n_iter=it, converged=converged)


def _check_finite(loss, grad, iteration):
    if not np.isfinite(loss) or not np.isfinite(grad).all():
        raise TrainingError(
            f"non-finite loss or gradient at iteration {iteration}", iteration=iteration
        )
