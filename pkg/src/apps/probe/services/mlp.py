"""src/apps/probe/services/mlp.py."""

from typing import Dict

import numpy as np

from src.core.exceptions import ValidationFailedError

Params = Dict[str, np.ndarray]


def init_params(dim: int, hidden: int, num_classes: int, seed: int) -> Params:
    """Uniform in +-1/sqrt(fan_in), seeded."""
    rng = np.random.default_rng(seed)
    bound_in, bound_hidden = 1.0 / np.sqrt(dim), 1.0 / np.sqrt(hidden)
    return {
        "W1": rng.uniform(-bound_in, bound_in, (hidden, dim)),
        "b1": rng.uniform(-bound_in, bound_in, hidden),
        "W2": rng.uniform(-bound_hidden, bound_hidden, (num_classes, hidden)),
        "b2": rng.uniform(-bound_hidden, bound_hidden, num_classes),
    }


def softmax(logits: np.ndarray) -> np.ndarray:
    """Row-wise softmax, shifted by the row maximum."""
    shifted = logits - logits.max(axis=-1, keepdims=True)
    exp = np.exp(shifted)
    return exp / exp.sum(axis=-1, keepdims=True)


def _check_dim(params: Params, x: np.ndarray) -> None:
    if x.shape[-1] != params["W1"].shape[1]:
        raise ValidationFailedError(f"Input dimension {x.shape[-1]} != probe dimension {params['W1'].shape[1]}")


def mlp_forward(params: Params, x: np.ndarray) -> np.ndarray:
    """Class probabilities for a vector [D] or a batch [N][D]."""
    x = np.asarray(x, dtype=np.float64)
    _check_dim(params, x)
    hidden = np.maximum(x @ params["W1"].T + params["b1"], 0.0)
    return softmax(hidden @ params["W2"].T + params["b2"])


def cross_entropy(params: Params, x: np.ndarray, y: np.ndarray) -> float:
    """Mean negative log-likelihood of the gold classes."""
    probs = mlp_forward(params, x)
    picked = probs[np.arange(len(y)), y]
    return float(-np.mean(np.log(np.maximum(picked, np.finfo(np.float64).tiny))))


def gradients(params: Params, x: np.ndarray, y: np.ndarray) -> Params:
    """Analytic gradients of cross_entropy."""
    x = np.asarray(x, dtype=np.float64)
    _check_dim(params, x)
    n = x.shape[0]
    pre = x @ params["W1"].T + params["b1"]
    hidden = np.maximum(pre, 0.0)
    probs = softmax(hidden @ params["W2"].T + params["b2"])
    d_logits = probs
    d_logits[np.arange(n), y] -= 1.0
    d_logits /= n
    d_hidden = (d_logits @ params["W2"]) * (pre > 0)
    return {
        "W1": d_hidden.T @ x,
        "b1": d_hidden.sum(axis=0),
        "W2": d_logits.T @ hidden,
        "b2": d_logits.sum(axis=0),
    }


class Adam:
    """Adaptive-moment optimizer over a parameter dict, updated in place."""

    def __init__(self, params: Params, lr: float = 1e-3, beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.step_count = 0
        self.m = {k: np.zeros_like(v) for k, v in params.items()}
        self.v = {k: np.zeros_like(v) for k, v in params.items()}

    def step(self, params: Params, grads: Params) -> None:
        """One bias-corrected update."""
        self.step_count += 1
        t = self.step_count
        for k, g in grads.items():
            self.m[k] = self.beta1 * self.m[k] + (1 - self.beta1) * g
            self.v[k] = self.beta2 * self.v[k] + (1 - self.beta2) * g * g
            m_hat = self.m[k] / (1 - self.beta1**t)
            v_hat = self.v[k] / (1 - self.beta2**t)
            params[k] -= self.lr * m_hat / (np.sqrt(v_hat) + self.eps)
