"""Mask-respecting gradient training of the factor chain.

The loss is the summed squared complex residual over a batch,
l = sum_i ||B(x_i) - y_i||_2^2. Weights are complex; the gradient reported
for a weight w is dl/dRe(w) + i*dl/dIm(w), so central finite differences on
the real and imaginary parts match it componentwise. Adam keeps separate
second-moment accumulators for the real and imaginary channels.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from . import operator
from .dataset import DatasetSpec, fresh_batch, generate
from .factors import ButterflyFactors


@dataclass(frozen=True)
class TrainConfig:
    batch_size: int = 256
    max_iters: int = 2000
    lr_init: float = 1e-4
    lr_decay_rate: float = 0.985
    lr_decay_steps: int = 100
    optimizer: str = "adam"
    beta1: float = 0.9
    beta2: float = 0.999
    epsilon: float = 1e-8
    seed: int = 0
    loss_every: int = 10

    def __post_init__(self):
        if self.max_iters < 0:
            raise ValueError("max_iters must be nonnegative")
        if self.batch_size < 1:
            raise ValueError("batch_size must be positive")
        if self.lr_init <= 0:
            raise ValueError("lr_init must be positive")
        if not 0 < self.lr_decay_rate <= 1:
            raise ValueError("lr_decay_rate must lie in (0, 1]")
        if self.optimizer not in ("adam", "sgd"):
            raise ValueError("optimizer must be 'adam' or 'sgd'")

    def lr_at(self, iteration: int) -> float:
        return self.lr_init * self.lr_decay_rate ** (
            iteration / self.lr_decay_steps
        )


@dataclass
class TrainReport:
    pre_train_rel_error: float
    post_train_rel_error: float
    loss_curve: list[tuple[int, float]] = field(default_factory=list)
    lr_curve: list[float] = field(default_factory=list)
    wall_time: float = 0.0
    diverged: bool = False

    def to_csv(self) -> str:
        lines = ["iteration,loss,lr"]
        for (it, loss), lr in zip(self.loss_curve, self.lr_curve):
            lines.append(f"{it},{loss!r},{lr!r}")
        return "\n".join(lines) + "\n"


def loss(factors: ButterflyFactors, batch) -> float:
    X, Y = batch
    pred, _ = operator.forward(factors, X)
    return float(np.sum(np.abs(pred - Y) ** 2))


def gradient(factors: ButterflyFactors, batch):
    """(loss value, masked per-factor gradients keyed like the weights)."""
    X, Y = batch
    pred, cache = operator.forward(factors, X, keep_states=True)
    residual = pred - np.asarray(Y)
    value = float(np.sum(np.abs(residual) ** 2))
    grads = {}
    adjoint = residual
    for name in reversed(factors.factor_names()):
        gW, adjoint = operator.layer_backward(factors, name, cache[name], adjoint)
        grads[name] = np.where(factors.masks[name], 2.0 * gW, 0.0)
    return value, grads


class Adam:
    """Adam on the real and imaginary parts of complex weight arrays."""

    def __init__(self, shapes: dict, config: TrainConfig):
        self.cfg = config
        self.m = {k: np.zeros(s, dtype=complex) for k, s in shapes.items()}
        self.v = {k: np.zeros(s, dtype=complex) for k, s in shapes.items()}
        self.t = 0

    def step(self, weights: dict, grads: dict, lr: float) -> None:
        cfg = self.cfg
        self.t += 1
        bc1 = 1.0 - cfg.beta1**self.t
        bc2 = 1.0 - cfg.beta2**self.t
        for name, g in grads.items():
            m = self.m[name] = cfg.beta1 * self.m[name] + (1 - cfg.beta1) * g
            v = self.v[name] = cfg.beta2 * self.v[name] + (1 - cfg.beta2) * (
                g.real**2 + 1j * g.imag**2
            )
            mh, vh = m / bc1, v / bc2
            weights[name] -= lr * (
                mh.real / (np.sqrt(vh.real) + cfg.epsilon)
                + 1j * mh.imag / (np.sqrt(vh.imag) + cfg.epsilon)
            )


class Sgd:
    def __init__(self, shapes: dict, config: TrainConfig):
        pass

    def step(self, weights: dict, grads: dict, lr: float) -> None:
        for name, g in grads.items():
            weights[name] -= lr * g


def evaluate(factors: ButterflyFactors, dataset) -> tuple[float, float]:
    """Mean and standard deviation of ||B(x) - y|| / ||y|| over a dataset."""
    X, Y = dataset
    if len(X) == 0:
        raise ValueError("empty dataset")
    pred, _ = operator.forward(factors, X)
    errs = np.linalg.norm(pred - Y, axis=1) / np.linalg.norm(Y, axis=1)
    return float(errs.mean()), float(errs.std())


def train(
    factors: ButterflyFactors,
    spec: DatasetSpec,
    config: TrainConfig,
    test_size: int = 1000,
) -> tuple[ButterflyFactors, TrainReport]:
    """Adam/SGD refinement with a fresh batch per iteration.

    The pre-training error is evaluated on the first batch; the post-training
    error on a held-out set of `test_size` samples drawn from a shifted seed.
    """
    factors = factors.copy()
    weights = factors.weights()
    opt_cls = Adam if config.optimizer == "adam" else Sgd
    opt = opt_cls({k: w.shape for k, w in weights.items()}, config)
    data_spec = DatasetSpec(
        spec.N, spec.g_center, spec.g_width, spec.K0, spec.K,
        seed=config.seed, count=spec.count,
    )
    first_batch = fresh_batch(data_spec, config.batch_size, 0)
    pre_err, _ = evaluate(factors, first_batch)
    report = TrainReport(pre_err, pre_err)
    start = time.perf_counter()
    for it in range(config.max_iters):
        batch = (
            first_batch if it == 0
            else fresh_batch(data_spec, config.batch_size, it)
        )
        value, grads = gradient(factors, batch)
        if not np.isfinite(value):
            report.diverged = True
            break
        lr = config.lr_at(it)
        if it % config.loss_every == 0:
            report.loss_curve.append((it, value))
            report.lr_curve.append(lr)
        opt.step(weights, grads, lr)
    report.wall_time = time.perf_counter() - start
    test = generate(
        DatasetSpec(spec.N, spec.g_center, spec.g_width, spec.K0, spec.K,
                    seed=config.seed + 10**6, count=test_size)
    )
    report.post_train_rel_error = evaluate(factors, test)[0]
    return factors, report
