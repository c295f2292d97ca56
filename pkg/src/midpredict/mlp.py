"""Two-layer feed-forward classifier trained by scaled conjugate gradient.

Architecture: d inputs, one hidden layer of tanh units, a single logistic
output giving the conflict probability. Training minimizes mean binary
cross-entropy over the whole batch.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import expit
from sklearn.base import BaseEstimator, ClassifierMixin
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_array, check_X_y

from ._util import STREAM_MLP, make_rng
from .scg import scg_minimize

# Probabilities are clamped away from {0, 1} inside the loss so the
# cross-entropy stays finite for saturated outputs.
_EPS = 1e-12


@dataclass(frozen=True)
class MlpNetwork:
    """Weights of the two-layer network; immutable once built."""

    w1: np.ndarray  # (n_hidden, n_inputs)
    b1: np.ndarray  # (n_hidden,)
    w2: np.ndarray  # (1, n_hidden)
    b2: np.ndarray  # (1,)

    def __post_init__(self):
        for arr in (self.w1, self.b1, self.w2, self.b2):
            if not np.isfinite(arr).all():
                raise ValueError("network weights must be finite")
        if self.w1.shape[0] != self.b1.shape[0] or self.w2.shape != (1, self.w1.shape[0]):
            raise ValueError("inconsistent layer shapes")

    @property
    def n_inputs(self) -> int:
        return self.w1.shape[1]

    @property
    def n_hidden(self) -> int:
        return self.w1.shape[0]

    def forward(self, X) -> np.ndarray:
        """Conflict probability for each row of X (or a single vector)."""
        X = np.asarray(X, dtype=float)
        single = X.ndim == 1
        X = np.atleast_2d(X)
        if X.shape[1] != self.n_inputs:
            raise ValueError(
                f"dimension mismatch: {X.shape[1]} features vs {self.n_inputs} inputs"
            )
        hidden = np.tanh(X @ self.w1.T + self.b1)
        out = expit(hidden @ self.w2.T + self.b2).ravel()
        return float(out[0]) if single else out


def mlp_forward(net: MlpNetwork, x) -> float | np.ndarray:
    return net.forward(x)


def mlp_predict(net: MlpNetwork, x, threshold: float = 0.5):
    """'conflict' when the forward probability reaches the threshold."""
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    p = net.forward(x)
    if np.isscalar(p):
        return "conflict" if p >= threshold else "peace"
    return np.where(p >= threshold, "conflict", "peace")


def _shapes(n_inputs: int, n_hidden: int):
    return ((n_hidden, n_inputs), (n_hidden,), (1, n_hidden), (1,))


def pack_weights(net: MlpNetwork) -> np.ndarray:
    return np.concatenate([a.ravel() for a in (net.w1, net.b1, net.w2, net.b2)])


def unpack_weights(w: np.ndarray, n_inputs: int, n_hidden: int) -> MlpNetwork:
    parts = []
    offset = 0
    for shape in _shapes(n_inputs, n_hidden):
        size = int(np.prod(shape))
        parts.append(w[offset : offset + size].reshape(shape))
        offset += size
    if offset != w.size:
        raise ValueError("weight vector length does not match the architecture")
    return MlpNetwork(*parts)


def mlp_loss_grad(net: MlpNetwork, X, targets) -> tuple[float, MlpNetwork]:
    """Mean binary cross-entropy and its exact gradient.

    Targets are 0 (peace) or 1 (conflict). The gradient is returned as an
    MlpNetwork holding the partial derivative for every weight and bias.
    """
    X = np.atleast_2d(np.asarray(X, dtype=float))
    t = np.asarray(targets, dtype=float).ravel()
    if len(X) == 0:
        raise ValueError("batch must be nonempty")
    if len(X) != len(t):
        raise ValueError("batch and targets length mismatch")
    if not set(np.unique(t)) <= {0.0, 1.0}:
        raise ValueError("targets must be 0 or 1")

    n = len(X)
    hidden = np.tanh(X @ net.w1.T + net.b1)         # (n, M)
    p = expit(hidden @ net.w2.T + net.b2).ravel()   # (n,)
    p_safe = np.clip(p, _EPS, 1.0 - _EPS)
    loss = float(-np.mean(t * np.log(p_safe) + (1.0 - t) * np.log(1.0 - p_safe)))

    # Backpropagation; the logistic/cross-entropy pair makes the output
    # delta simply (p - t) / n.
    d_out = ((p - t) / n)[:, None]                  # (n, 1)
    g_w2 = d_out.T @ hidden                         # (1, M)
    g_b2 = d_out.sum(axis=0)                        # (1,)
    d_hidden = (d_out @ net.w2) * (1.0 - hidden**2)  # (n, M)
    g_w1 = d_hidden.T @ X                           # (M, d)
    g_b1 = d_hidden.sum(axis=0)                     # (M,)
    return loss, MlpNetwork(g_w1, g_b1, g_w2, g_b2)


def init_network(n_inputs: int, n_hidden: int, rng: np.random.Generator) -> MlpNetwork:
    """Uniform initialization in +-1/sqrt(fan_in) per layer."""
    lim1 = 1.0 / np.sqrt(n_inputs)
    lim2 = 1.0 / np.sqrt(n_hidden)
    return MlpNetwork(
        w1=rng.uniform(-lim1, lim1, size=(n_hidden, n_inputs)),
        b1=rng.uniform(-lim1, lim1, size=n_hidden),
        w2=rng.uniform(-lim2, lim2, size=(1, n_hidden)),
        b2=rng.uniform(-lim2, lim2, size=1),
    )


class MlpClassifier(BaseEstimator, ClassifierMixin):
    """Feed-forward network estimator with scikit-learn conventions.

    Targets are 0 (peace) and 1 (conflict). `predict_proba` follows the
    two-column convention; `conflict_score` returns the raw conflict
    probability for ROC work.

    Parameters
    ----------
    n_hidden : int
        Hidden-unit count.
    cycles : int
        Optimizer iterations over the full batch.
    sigma0, lambda0 : float
        Curvature-probe step and initial scale of the optimizer.
    grad_tol : float
        Early-stop threshold on the gradient norm.
    random_state : int
        Seed for weight initialization.
    """

    def __init__(
        self,
        n_hidden: int = 10,
        cycles: int = 100,
        sigma0: float = 1e-4,
        lambda0: float = 1e-6,
        grad_tol: float = 1e-10,
        random_state: int = 0,
    ):
        self.n_hidden = n_hidden
        self.cycles = cycles
        self.sigma0 = sigma0
        self.lambda0 = lambda0
        self.grad_tol = grad_tol
        self.random_state = random_state

    def fit(self, X, y):
        X, y = check_X_y(np.asarray(X, dtype=float), np.asarray(y, dtype=float))
        if not set(np.unique(y)) <= {0.0, 1.0}:
            raise ValueError("targets must be 0 or 1")
        if self.n_hidden < 1:
            raise ValueError("n_hidden must be >= 1")
        if self.cycles < 1:
            raise ValueError("cycles must be >= 1")
        n_inputs = X.shape[1]
        rng = make_rng(self.random_state, STREAM_MLP)
        net0 = init_network(n_inputs, self.n_hidden, rng)

        def fun_grad(w):
            net = unpack_weights(w, n_inputs, self.n_hidden)
            loss, grad_net = mlp_loss_grad(net, X, y)
            return loss, pack_weights(grad_net)

        result = scg_minimize(
            fun_grad,
            pack_weights(net0),
            max_iter=self.cycles,
            sigma0=self.sigma0,
            lambda0=self.lambda0,
            grad_tol=self.grad_tol,
        )
        self.network_ = unpack_weights(result.w, n_inputs, self.n_hidden)
        self.loss_curve_ = result.losses
        self.n_iter_ = result.n_iter
        self.converged_ = result.converged
        self.classes_ = np.array([0.0, 1.0])
        return self

    def _check_fitted(self):
        if not hasattr(self, "network_"):
            raise NotFittedError("MlpClassifier is not fitted")

    def predict_proba(self, X) -> np.ndarray:
        self._check_fitted()
        X = check_array(np.asarray(X, dtype=float))
        p = self.network_.forward(X)
        return np.column_stack([1.0 - p, p])

    def conflict_score(self, X) -> np.ndarray:
        return self.predict_proba(X)[:, 1]

    def predict(self, X, threshold: float = 0.5) -> np.ndarray:
        if not 0.0 < threshold < 1.0:
            raise ValueError("threshold must lie in (0, 1)")
        return (self.conflict_score(X) >= threshold).astype(float)
