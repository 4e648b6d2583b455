"""Butterfly factorization of windowed discrete Fourier kernels.

A windowed DFT (frequencies K0..K0+K-1 of an N-point signal) is represented
as a chain of sparse structured factors y = U G ... M H ... V x that applies
in O(N log N), admits a closed-form initialization with exponentially small
error in the depth L, and can be refined by mask-respecting gradient
training.
"""

from .chebyshev import Interval, cheb_points, lebesgue_constant
from .complexity import count_params_empirical, count_params_formula
from .factors import (ButterflyFactors, butterfly_init, factor_norms,
                      inflate, materialize, random_init)
from .geometry import Geometry, build_geometry
from .metrics import rel_error, spectral_norm, theorem3_bound
from .operator import apply, apply_batch
from .oracle import dense_kernel, oracle_apply

__all__ = [
    "Interval",
    "cheb_points",
    "lebesgue_constant",
    "count_params_empirical",
    "count_params_formula",
    "ButterflyFactors",
    "butterfly_init",
    "factor_norms",
    "inflate",
    "materialize",
    "random_init",
    "Geometry",
    "build_geometry",
    "rel_error",
    "spectral_norm",
    "theorem3_bound",
    "apply",
    "apply_batch",
    "dense_kernel",
    "oracle_apply",
]
