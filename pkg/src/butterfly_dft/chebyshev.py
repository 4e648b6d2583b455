"""Chebyshev interpolation machinery.

Reference grid, Lagrange basis evaluation, Lebesgue-constant estimation, and
an empirical check of the low-rank interpolation bound for the oscillatory
kernel K(z) = exp(-2*pi*i*z).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Interval:
    """Half-open interval [lo, hi)."""

    lo: float
    hi: float

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ValueError(f"degenerate interval [{self.lo}, {self.hi})")

    @property
    def center(self) -> float:
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo


def cheb_reference(r: int) -> np.ndarray:
    """Chebyshev nodes of order r on [-1/2, 1/2], descending.

    These are the roots of the degree-r Chebyshev polynomial scaled to the
    unit-width reference interval: z_i = (1/2) cos((2i-1) pi / (2r)).
    """
    if r < 1:
        raise ValueError("r must be a positive integer")
    i = np.arange(1, r + 1)
    return 0.5 * np.cos((2 * i - 1) * np.pi / (2 * r))


def cheb_points(r: int, target: Interval) -> np.ndarray:
    """Reference nodes affinely mapped onto `target` (order preserved)."""
    return target.center + target.width * cheb_reference(r)


def lagrange_eval(nodes: np.ndarray, k: int, x) -> np.ndarray | float:
    """k-th Lagrange basis polynomial over `nodes`, by the product formula."""
    return lagrange_basis(nodes, x)[k]


def lagrange_basis(nodes: np.ndarray, x) -> np.ndarray:
    """All r Lagrange basis polynomials evaluated at x.

    Returns shape (r,) + shape(x). Direct product formula; conditioning is
    fine for the operating range r <= 16.
    """
    nodes = np.asarray(nodes, dtype=float)
    r = nodes.shape[0]
    diffs = nodes[:, None] - nodes[None, :]
    if r > 1 and np.min(np.abs(diffs[~np.eye(r, dtype=bool)])) == 0.0:
        raise ValueError("degenerate grid: duplicate nodes")
    x = np.asarray(x, dtype=float)
    out = np.ones((r,) + x.shape)
    for k in range(r):
        for p in range(r):
            if p != k:
                out[k] *= (x - nodes[p]) / diffs[k, p]
    return out


def lebesgue_bound(r: int) -> float:
    """Classical bound (2/pi) ln r + 1 on the Lebesgue constant."""
    return 2.0 / math.pi * math.log(r) + 1.0


def lebesgue_constant(r: int, samples: int = 4096) -> float:
    """max over a dense sample of [-1/2, 1/2] of sum_k |L_k(x)|.

    A lower estimate of the true Lebesgue constant, used for invariant checks
    against the classical bound.
    """
    if samples < 1:
        raise ValueError("samples must be positive")
    nodes = cheb_reference(r)
    xs = np.linspace(-0.5, 0.5, samples)
    return float(np.abs(lagrange_basis(nodes, xs)).sum(axis=0).max())


@dataclass(frozen=True)
class LowRankCheck:
    measured_sup_error: float
    theorem_bound: float
    hypothesis_ok: bool


def _kernel(z: np.ndarray) -> np.ndarray:
    # local copy to keep this module dependency-free; the oracle module owns
    # the configurable sign convention for the operator itself.
    return np.exp(-2j * np.pi * z)


def lowrank_residual(
    A: Interval,
    B: Interval,
    r: int,
    n_samples: int = 64,
    interpolate: str = "time",
) -> LowRankCheck:
    """Sampled sup-error of the rank-r separated kernel approximation.

    interpolate="time" uses the expansion with Chebyshev nodes t_k in B:
        K(xi*t) ~= sum_k K(xi*t_k) K(xi0*(t - t_k)) L_k(t)
    interpolate="freq" swaps the roles (nodes xi_k in A):
        K(xi*t) ~= sum_k K((xi - xi_k)*t0) L_k(xi) K(xi_k*t)
    Both satisfy the same closed-form bound
        (2 + (2/pi) ln r) * (pi*e*w(A)*w(B) / (2r))**r
    under the hypothesis w(A)*w(B) <= r/(pi*e).
    """
    wA, wB = A.width, B.width
    hypothesis_ok = math.pi * math.e * wA * wB <= r
    bound = (2.0 + 2.0 / math.pi * math.log(r)) * (
        math.pi * math.e * wA * wB / (2.0 * r)
    ) ** r
    xi = np.linspace(A.lo, A.hi, n_samples)
    t = np.linspace(B.lo, B.hi, n_samples)
    exact = _kernel(np.outer(xi, t))
    if interpolate == "time":
        tk = cheb_points(r, B)
        L = lagrange_basis(tk, t)  # (r, n), indexed (k, q)
        transfer = _kernel(A.center * (t[None, :] - tk[:, None])) * L  # (k, q)
        approx = _kernel(np.outer(xi, tk)) @ transfer
    elif interpolate == "freq":
        xik = cheb_points(r, A)
        L = lagrange_basis(xik, xi)  # (r, n), indexed (k, p)
        transfer = _kernel((xi[None, :] - xik[:, None]) * B.center) * L
        approx = transfer.T @ _kernel(np.outer(xik, t))
    else:
        raise ValueError("interpolate must be 'time' or 'freq'")
    measured = float(np.abs(exact - approx).max())
    return LowRankCheck(measured, float(bound), hypothesis_ok)
