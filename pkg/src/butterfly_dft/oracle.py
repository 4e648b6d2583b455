"""Exact dense windowed Fourier kernel and direct O(N*K) application.

Ground truth for every accuracy measurement. Entry (p, q) of the kernel is
exp(sign * 2*pi*i * xi_p * t_q) with sign = -1 by default (forward-DFT
convention); the sign is a global flag because relative errors are invariant
under conjugation.
"""

from __future__ import annotations

import numpy as np

from .geometry import Geometry

_KERNEL_SIGN = -1.0


def set_kernel_sign(sign: int) -> None:
    """Set the global kernel sign convention (+1 or -1)."""
    global _KERNEL_SIGN
    if sign not in (1, -1, 1.0, -1.0):
        raise ValueError("sign must be +1 or -1")
    _KERNEL_SIGN = float(sign)


def kernel_sign() -> float:
    return _KERNEL_SIGN


def kernel(z) -> np.ndarray:
    """The oscillatory kernel K(z) = exp(sign * 2*pi*i * z)."""
    return np.exp(_KERNEL_SIGN * 2j * np.pi * np.asarray(z))


def window_kernel(N: int, K0: int, K: int) -> np.ndarray:
    """Dense K x N kernel for frequencies K0..K0+K-1 at samples q/N."""
    t = np.arange(N) / N
    xi = K0 + np.arange(K)
    return kernel(np.outer(xi, t))


def dense_kernel(geometry: Geometry) -> np.ndarray:
    """Dense K x N kernel matrix for the geometry's window (unnormalized)."""
    return window_kernel(geometry.N, geometry.K0, geometry.K)


def oracle_apply(geometry: Geometry, x: np.ndarray) -> np.ndarray:
    """Direct summation x_hat(xi_p) = sum_q K(xi_p * t_q) x(t_q)."""
    x = np.asarray(x)
    if x.shape != (geometry.N,):
        raise ValueError(f"expected input of length {geometry.N}, got {x.shape}")
    return dense_kernel(geometry) @ x
