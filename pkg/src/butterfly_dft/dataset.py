"""Synthetic Gaussian-envelope spectrum datasets.

A sample is built by drawing a complex spectrum with independent uniform
[-1, 1) real and imaginary parts at integer frequencies 0..N-1, multiplying
by a Gaussian envelope exp(-(k - g_center)^2 / (2 g_width^2)), taking the
real part of the inverse DFT as the input x, and recomputing the target as
the exact windowed transform of x.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace

import numpy as np

from . import oracle


@dataclass(frozen=True)
class DatasetSpec:
    N: int
    g_center: float
    g_width: float
    K0: int
    K: int
    seed: int = 0
    count: int = 1

    def __post_init__(self):
        if self.K0 + self.K > self.N:
            raise ValueError("frequency window must fit inside 0..N")
        if self.g_width <= 0:
            raise ValueError("g_width must be positive")


# Published benchmark setups at N=1024 (window low/high, broadband/smooth).
PRESETS = {
    "dft-lfreq": DatasetSpec(1024, 0, 500, 0, 128),
    "dft-hfreq": DatasetSpec(1024, 0, 500, 256, 128),
    "dftsmooth-lfreq": DatasetSpec(1024, 0, 10, 0, 128),
    "dftsmooth-hfreq": DatasetSpec(1024, 256, 10, 256, 128),
}


def envelope(spec: DatasetSpec) -> np.ndarray:
    k = np.arange(spec.N)
    return np.exp(-((k - spec.g_center) ** 2) / (2.0 * spec.g_width**2))


def generate(spec: DatasetSpec) -> tuple[np.ndarray, np.ndarray]:
    """Returns (X, Y): X real (count, N); Y complex (count, K).

    Deterministic: sample i uses numpy's default PCG64 generator seeded with
    [spec.seed, i], so samples are independent of batch boundaries.
    """
    return fresh_batch(spec, spec.count, 0)


def fresh_batch(spec: DatasetSpec, batch_size: int, batch_index: int):
    """Batch b covers sample indices [b*batch_size, (b+1)*batch_size)."""
    env = envelope(spec)
    X = np.empty((batch_size, spec.N))
    for i in range(batch_size):
        rng = np.random.default_rng([spec.seed, batch_index * batch_size + i])
        u = rng.uniform(-1.0, 1.0, size=(2, spec.N))
        X[i] = np.fft.ifft((u[0] + 1j * u[1]) * env).real
    kernel = oracle.window_kernel(spec.N, spec.K0, spec.K)
    return X, X @ kernel.T


def transfer_specs(base: DatasetSpec, centers) -> list[DatasetSpec]:
    """Copies of `base` sweeping the envelope center; distinct seeds."""
    return [
        replace(base, g_center=c, seed=base.seed + i)
        for i, c in enumerate(centers)
    ]


def to_csv(spec: DatasetSpec) -> str:
    """One row per sample: N real x-values, then 2K reals (Re y, Im y)."""
    X, Y = generate(spec)
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(
        [f"x{q}" for q in range(spec.N)]
        + [p for k in range(spec.K) for p in (f"y{k}_re", f"y{k}_im")]
    )
    for x, y in zip(X, Y):
        row = list(x) + [p for v in y for p in (v.real, v.imag)]
        writer.writerow([repr(float(v)) for v in row])
    return buf.getvalue()
