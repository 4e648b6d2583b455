"""Relative matrix p-norm approximation errors and the closed-form bound."""

from __future__ import annotations

import math

import numpy as np

from . import oracle
from .chebyshev import lebesgue_bound
from .factors import ButterflyFactors, materialize
from .geometry import Geometry


def matrix_norm(A: np.ndarray, p) -> float:
    if p == 1:
        return float(np.abs(A).sum(axis=0).max())
    if p in (np.inf, "inf", float("inf")):
        return float(np.abs(A).sum(axis=1).max())
    if p == 2:
        return float(np.linalg.norm(A, 2))
    raise ValueError("p must be 1, 2, or inf")


def rel_error(factors: ButterflyFactors, p) -> float:
    """||K - B||_p / ||K||_p with both matrices materialized exactly."""
    Kd = oracle.dense_kernel(factors.geometry)
    B = materialize(factors)
    return matrix_norm(Kd - B, p) / matrix_norm(Kd, p)


def theorem3_bound(g: Geometry, p) -> float:
    """Closed-form operator error bound for the butterfly initialization.

    eps_p <= m^(1/p) * r^(Lt(1-1/p) + Lxi/p + 1) * (2*Lam)^(L+3)
             * K (pi e)^r / r^(r-1),   m = min(1, K/2^L).
    """
    if p in (np.inf, "inf", float("inf")):
        pinv = 0.0
    else:
        pinv = 1.0 / p
    r, K, L = g.r, g.K, g.L
    lam = lebesgue_bound(r)
    m = min(1.0, K / 2**L)
    return (
        m**pinv
        * r ** (g.L_t * (1 - pinv) + g.L_xi * pinv + 1)
        * (2 * lam) ** (L + 3)
        * K
        * (math.pi * math.e) ** r
        / r ** (r - 1)
    )


def theorem3_bound_L_form(g: Geometry, p) -> float:
    """Alternative depth-form bound, valid when L <= log2 K:

    eps_p <= C_{r,K} * (Lam / 2^(r-2))^L * r^(Lt(1-1/p) + Lxi/p),
    C_{r,K} = (2*Lam)^3 (pi e K)^r / (2r)^(r-1).
    """
    logK = g.K.bit_length() - 1
    if g.L > logK:
        raise ValueError("depth form requires L <= log2 K")
    if p in (np.inf, "inf", float("inf")):
        pinv = 0.0
    else:
        pinv = 1.0 / p
    r, K = g.r, g.K
    lam = lebesgue_bound(r)
    C = (2 * lam) ** 3 * (math.pi * math.e * K) ** r / (2 * r) ** (r - 1)
    return C * (lam / 2 ** (r - 2)) ** g.L * r ** (
        g.L_t * (1 - pinv) + g.L_xi * pinv
    )


def spectral_norm(A: np.ndarray, tol: float = 1e-10, max_iters: int = 2000) -> float:
    """Largest singular value by power iteration on A* A.

    Deterministic all-ones start; raises on non-convergence with the last
    iterate attached to the exception.
    """
    A = np.asarray(A)
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    v = np.ones(A.shape[1], dtype=complex)
    v /= np.linalg.norm(v)
    sigma = 0.0
    for _ in range(max_iters):
        w = A.conj().T @ (A @ v)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            return 0.0
        new_sigma = math.sqrt(norm)
        v = w / norm
        if abs(new_sigma - sigma) <= tol * max(new_sigma, 1e-300):
            return new_sigma
        sigma = new_sigma
    err = RuntimeError(f"power iteration did not converge; last value {sigma}")
    err.last_value = sigma
    raise err
