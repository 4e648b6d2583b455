"""Spectral energy functionals and the square-sum readout layer.

E1(x) = sum_{k=1}^{K-1} (2/k^2) |x_hat_k|^2 and
E2(x) = sum_{k=K0+1}^{K0+K-1} (2/(k-K0)^2) |x_hat_k|^2
with the unitary transform x_hat = DFT(x)/sqrt(N). The square-sum layer
computes sum_k w_k |f_k|^2 from a K-vector of features; with the exact
weights and unitary-scaled windowed-transform features it reproduces the
functionals, and over approximate butterfly features it perturbs them by at
most a constant times the operator error (quadratic form on the unit ball).
"""

from __future__ import annotations

import numpy as np

from . import operator
from .factors import ButterflyFactors
from .training import TrainConfig


def _unitary_spectrum(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x)
    if np.iscomplexobj(x):
        raise TypeError("energy functionals are defined for real signals")
    return np.fft.fft(x) / np.sqrt(x.shape[-1])


def energy_e2(x: np.ndarray, K0: int, K: int) -> float:
    """Windowed spectral energy; the sum is open at k = K0."""
    x = np.asarray(x)
    N = x.shape[-1]
    if K < 2:
        raise ValueError("window must contain at least one weighted frequency")
    if K0 + K > N // 2:
        raise ValueError("window must lie in the real-signal half spectrum")
    xh = _unitary_spectrum(x)
    k = np.arange(K0 + 1, K0 + K)
    return float(np.sum(2.0 / (k - K0) ** 2 * np.abs(xh[..., k]) ** 2))


def energy_e1(x: np.ndarray, K: int) -> float:
    """Low-frequency energy: E2 with the window anchored at zero."""
    return energy_e2(x, 0, K)


def exact_weights(K: int) -> np.ndarray:
    """Square-sum weights reproducing E1/E2 from windowed features.

    w_0 = 0 (the anchor frequency is excluded), w_k = 2/k^2 for k >= 1,
    where k indexes the feature vector relative to the window start.
    """
    w = np.zeros(K)
    k = np.arange(1, K)
    w[1:] = 2.0 / k**2
    return w


class SquareSumLayer:
    """f -> sum_k w_k |f_k|^2 with trainable real weights."""

    def __init__(self, weights: np.ndarray):
        self.weights = np.asarray(weights, dtype=float)

    @classmethod
    def exact(cls, K: int) -> "SquareSumLayer":
        return cls(exact_weights(K))

    def apply(self, features: np.ndarray) -> np.ndarray:
        features = np.asarray(features)
        if features.shape[-1] != self.weights.shape[0]:
            raise ValueError(
                f"expected {self.weights.shape[0]} features, "
                f"got {features.shape[-1]}"
            )
        return np.abs(features) ** 2 @ self.weights


def square_sum_apply(layer: SquareSumLayer, features: np.ndarray) -> float:
    return float(layer.apply(features))


def functional_from_features(
    factors: ButterflyFactors, x: np.ndarray, layer: SquareSumLayer | None = None
) -> float:
    """Energy estimate from butterfly features of an unnormalized chain.

    The unitary 1/sqrt(N) feature scaling is absorbed into the quadratic
    weights as a 1/N rescale.
    """
    g = factors.geometry
    if layer is None:
        layer = SquareSumLayer.exact(g.K)
    features = operator.apply(factors, np.asarray(x, dtype=complex))
    return float(layer.apply(features) / g.N)


def train_square_sum(
    factors: ButterflyFactors,
    dataset: tuple[np.ndarray, np.ndarray],
    config: TrainConfig,
    layer: SquareSumLayer | None = None,
) -> tuple[SquareSumLayer, dict]:
    """Gradient descent on the readout weights over frozen factors.

    `dataset` is (X, targets) with targets from the exact functionals. The
    prediction for sample x is sum_k w_k |B(x)_k|^2 / N; the loss is the sum
    of squared prediction errors. Returns the trained layer and a report with
    pre/post mean relative errors.
    """
    g = factors.geometry
    X, targets = dataset
    targets = np.asarray(targets, dtype=float)
    feats2 = np.abs(operator.apply_batch(factors, np.asarray(X, complex))) ** 2
    feats2 /= g.N
    if layer is None:
        layer = SquareSumLayer.exact(g.K)
    w = layer.weights.copy()

    def rel_err(wvec):
        pred = feats2 @ wvec
        return float(np.mean(np.abs(pred - targets) / np.maximum(np.abs(targets), 1e-300)))

    pre = rel_err(w)
    m = np.zeros_like(w)
    v = np.zeros_like(w)
    diverged = False
    for it in range(config.max_iters):
        pred = feats2 @ w
        grad = 2.0 * feats2.T @ (pred - targets)
        if not np.all(np.isfinite(grad)):
            diverged = True
            break
        lr = config.lr_at(it)
        m = config.beta1 * m + (1 - config.beta1) * grad
        v = config.beta2 * v + (1 - config.beta2) * grad**2
        mh = m / (1 - config.beta1 ** (it + 1))
        vh = v / (1 - config.beta2 ** (it + 1))
        w -= lr * mh / (np.sqrt(vh) + config.epsilon)
    report = {
        "pre_rel_error": pre,
        "post_rel_error": rel_err(w),
        "diverged": diverged,
    }
    return SquareSumLayer(w), report
