"""One-hidden-layer ReLU network with hand-written backprop and an Adam optimiser."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

PARAM_NAMES = ("W1", "b1", "W2", "b2")


@dataclass
class ApproximatorParams:
    """Weights for x -> relu(x @ W1 + b1) @ W2 + b2.

    W1 is (n_in, hidden), W2 is (hidden, n_out). Inputs are row vectors or
    batches of rows.
    """

    W1: np.ndarray
    b1: np.ndarray
    W2: np.ndarray
    b2: np.ndarray

    def __post_init__(self):
        n_in, hidden = self.W1.shape
        if self.b1.shape != (hidden,) or self.W2.shape[0] != hidden or self.b2.shape != (self.W2.shape[1],):
            raise ValueError(
                f"inconsistent shapes W1{self.W1.shape} b1{self.b1.shape} "
                f"W2{self.W2.shape} b2{self.b2.shape}"
            )

    @property
    def n_in(self) -> int:
        return self.W1.shape[0]

    @property
    def n_out(self) -> int:
        return self.W2.shape[1]

    def arrays(self) -> dict[str, np.ndarray]:
        return {name: getattr(self, name) for name in PARAM_NAMES}

    def copy(self) -> "ApproximatorParams":
        return ApproximatorParams(**{k: v.copy() for k, v in self.arrays().items()})

    def is_finite(self) -> bool:
        return all(np.all(np.isfinite(v)) for v in self.arrays().values())

    @classmethod
    def init(cls, n_in: int, hidden: int, n_out: int, rng: np.random.Generator,
             out_scale: float = 1.0) -> "ApproximatorParams":
        # He init for the ReLU layer, scaled Glorot on the output layer.
        W1 = rng.normal(0.0, np.sqrt(2.0 / max(n_in, 1)), size=(n_in, hidden))
        W2 = rng.normal(0.0, out_scale * np.sqrt(1.0 / hidden), size=(hidden, n_out))
        return cls(W1, np.zeros(hidden), W2, np.zeros(n_out))

    @classmethod
    def zeros(cls, n_in: int, hidden: int, n_out: int) -> "ApproximatorParams":
        return cls(np.zeros((n_in, hidden)), np.zeros(hidden), np.zeros((hidden, n_out)), np.zeros(n_out))


def forward(params: ApproximatorParams, x: np.ndarray) -> np.ndarray:
    """relu(x @ W1 + b1) @ W2 + b2."""
    return forward_cached(params, x)[0]


def forward_cached(params: ApproximatorParams, x: np.ndarray):
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != params.n_in:
        raise ValueError(f"input has {x.shape[-1]} features, network expects {params.n_in}")
    pre = x @ params.W1 + params.b1
    h = np.maximum(pre, 0.0)
    out = h @ params.W2 + params.b2
    return out, (x, pre, h)


def backward(params: ApproximatorParams, cache, grad_out: np.ndarray) -> dict[str, np.ndarray]:
    """Gradients of a scalar loss given dLoss/dOutput, for batched or single inputs."""
    x, pre, h = cache
    x2 = np.atleast_2d(x)
    h2 = np.atleast_2d(h)
    g2 = np.atleast_2d(grad_out)
    gh = (g2 @ params.W2.T) * (np.atleast_2d(pre) > 0)
    return {
        "W1": x2.T @ gh,
        "b1": gh.sum(axis=0),
        "W2": h2.T @ g2,
        "b2": g2.sum(axis=0),
    }


def gradient_check(params: ApproximatorParams,
                   loss: Callable[[ApproximatorParams], float],
                   grad: Callable[[ApproximatorParams], dict[str, np.ndarray]],
                   epsilon: float = 1e-5) -> float:
    """Max relative error between ``grad`` and central finite differences of ``loss``.

    The relative error for each parameter is
    |fd - an| / max(|fd|, |an|, 1e-8).
    """
    if not 0.0 < epsilon <= 1e-2:
        raise ValueError(f"epsilon must be in (0, 1e-2], got {epsilon}")
    analytic = grad(params)
    probe = params.copy()
    worst = 0.0
    for name in PARAM_NAMES:
        arr = getattr(probe, name)
        an = analytic[name]
        for idx in np.ndindex(arr.shape):
            orig = arr[idx]
            arr[idx] = orig + epsilon
            up = loss(probe)
            arr[idx] = orig - epsilon
            down = loss(probe)
            arr[idx] = orig
            fd = (up - down) / (2.0 * epsilon)
            denom = max(abs(fd), abs(an[idx]), 1e-8)
            worst = max(worst, abs(fd - an[idx]) / denom)
    return worst


class Adam:
    def __init__(self, params: ApproximatorParams, lr: float = 1e-3,
                 beta1: float = 0.9, beta2: float = 0.999, eps: float = 1e-8,
                 max_grad_norm: float | None = None):
        self.lr, self.beta1, self.beta2, self.eps = lr, beta1, beta2, eps
        self.max_grad_norm = max_grad_norm
        self.m = {k: np.zeros_like(v) for k, v in params.arrays().items()}
        self.v = {k: np.zeros_like(v) for k, v in params.arrays().items()}
        self.t = 0

    def step(self, params: ApproximatorParams, grads: dict[str, np.ndarray]) -> None:
        if self.max_grad_norm is not None:
            norm = np.sqrt(sum(float(np.sum(g * g)) for g in grads.values()))
            if norm > self.max_grad_norm:
                grads = {k: g * (self.max_grad_norm / norm) for k, g in grads.items()}
        self.t += 1
        c1 = 1.0 - self.beta1 ** self.t
        c2 = 1.0 - self.beta2 ** self.t
        for name, g in grads.items():
            m = self.m[name]
            v = self.v[name]
            m *= self.beta1
            m += (1.0 - self.beta1) * g
            v *= self.beta2
            v += (1.0 - self.beta2) * g * g
            arr = getattr(params, name)
            arr -= self.lr * (m / c1) / (np.sqrt(v / c2) + self.eps)


approximator_forward = forward
