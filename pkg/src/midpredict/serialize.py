"""Model file I/O: a self-describing JSON document per trained bundle.

The file holds the model family, all weights or support vectors, the
fitted scaler bounds and the training seed. Floats are written in their
shortest round-tripping form, so save followed by load reproduces the
model bit for bit.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from . import __version__
from ._util import ParseError
from .bundle import MLP, SVM, ModelBundle
from .kernels import KernelSpec
from .mlp import MlpClassifier, MlpNetwork
from .scaling import DyadScaler
from .svm import SvmClassifier, SvmModel
from .variables import VARIABLE_NAMES, VARIABLES

FORMAT = "midpredict-model/1"


def _scaler_doc(scaler: DyadScaler) -> dict:
    return {
        "variables": list(VARIABLE_NAMES),
        "lo": scaler.lo_.tolist(),
        "hi": scaler.hi_.tolist(),
    }


def _scaler_from_doc(doc: dict) -> DyadScaler:
    if doc.get("variables") != list(VARIABLE_NAMES):
        raise ParseError("model file variable layout does not match this package")
    scaler = DyadScaler()
    lo = np.asarray(doc["lo"], dtype=float)
    hi = np.asarray(doc["hi"], dtype=float)
    scaler.lo_ = lo
    scaler.hi_ = hi
    scaler.specs_ = tuple(
        s if s.has_bounds else s.with_bounds(lo[j], hi[j]) for j, s in enumerate(VARIABLES)
    )
    return scaler


def save_model(bundle: ModelBundle, path: str | Path) -> None:
    doc: dict = {
        "format": FORMAT,
        "tool_version": __version__,
        "family": bundle.family,
        "seed": bundle.seed,
        "scaler": _scaler_doc(bundle.scaler),
    }
    est = bundle.estimator
    if bundle.family == MLP:
        net: MlpNetwork = est.network_
        doc["model"] = {
            "n_inputs": net.n_inputs,
            "n_hidden": net.n_hidden,
            "hidden_activation": "tanh",
            "output_activation": "logistic",
            "w1": net.w1.tolist(),
            "b1": net.b1.tolist(),
            "w2": net.w2.tolist(),
            "b2": net.b2.tolist(),
            "params": {
                "n_hidden": est.n_hidden,
                "cycles": est.cycles,
                "sigma0": est.sigma0,
                "lambda0": est.lambda0,
                "grad_tol": est.grad_tol,
                "random_state": est.random_state,
            },
        }
    else:
        model: SvmModel = est.model_
        doc["model"] = {
            "kernel": {"kind": model.kernel.kind, "gamma": model.kernel.gamma},
            "c": model.c,
            "bias": model.bias,
            "n_features": int(model.support_x.shape[1]),
            "alpha": model.alpha.tolist(),
            "support_y": model.support_y.tolist(),
            "support_x": model.support_x.tolist(),
            "support_idx": None
            if model.support_idx is None
            else model.support_idx.tolist(),
            "params": {
                "C": est.C,
                "kernel": est.kernel,
                "gamma": est.gamma,
                "kkt_tol": est.kkt_tol,
                "max_passes": est.max_passes,
                "random_state": est.random_state,
            },
        }
    Path(path).write_text(json.dumps(doc, indent=1), encoding="utf-8", newline="")


def load_model(path: str | Path) -> ModelBundle:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: not a valid model file: {exc}") from None
    if doc.get("format") != FORMAT:
        raise ParseError(f"{path}: unknown model format {doc.get('format')!r}")
    family = doc["family"]
    scaler = _scaler_from_doc(doc["scaler"])
    m = doc["model"]
    if family == MLP:
        est = MlpClassifier(**m["params"])
        est.network_ = MlpNetwork(
            w1=np.asarray(m["w1"], dtype=float),
            b1=np.asarray(m["b1"], dtype=float),
            w2=np.asarray(m["w2"], dtype=float),
            b2=np.asarray(m["b2"], dtype=float),
        )
        est.classes_ = np.array([0.0, 1.0])
    elif family == SVM:
        est = SvmClassifier(**m["params"])
        kern = m["kernel"]
        support_idx = m.get("support_idx")
        est.model_ = SvmModel(
            support_x=np.asarray(m["support_x"], dtype=float).reshape(
                len(m["alpha"]), int(m["n_features"])
            ),
            support_y=np.asarray(m["support_y"], dtype=float),
            alpha=np.asarray(m["alpha"], dtype=float),
            bias=float(m["bias"]),
            kernel=KernelSpec(kern["kind"], kern["gamma"]),
            c=float(m["c"]),
            support_idx=None if support_idx is None else np.asarray(support_idx, dtype=int),
        )
        est.classes_ = np.array([-1.0, 1.0])
        est.support_vectors_ = est.model_.support_x
        est.dual_coef_ = (est.model_.alpha * est.model_.support_y)[None, :]
        est.intercept_ = np.array([est.model_.bias])
    else:
        raise ParseError(f"{path}: unknown model family {family!r}")
    return ModelBundle(family=family, estimator=est, scaler=scaler, seed=int(doc["seed"]))
