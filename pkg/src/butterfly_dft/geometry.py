"""Hierarchical partition of time [0, 1) and frequency [K0, K0+K).

Time domains at level l are the 2^l dyadic intervals B^l_j. Frequency domains
refine on a schedule tied to the switch level: their count is 2^l up to
L_min, stays 2^L_min through L_t, then grows again by a factor 2 per level
after the switch.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .chebyshev import Interval


def _is_pow2(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class LayerLayout:
    level: int
    freq_count: int
    freq_width: float
    time_count: int
    time_width: float


@dataclass(frozen=True)
class Geometry:
    N: int
    K: int
    K0: int
    L: int
    L_t: int
    L_xi: int
    L_min: int
    r: int
    admissible: bool
    layouts: tuple[LayerLayout, ...] = field(repr=False)

    # -- derived sizes ----------------------------------------------------
    @property
    def time_block(self) -> int:
        """Samples per time leaf (the V-factor block width)."""
        return self.N // 2**self.L

    @property
    def freq_leaf_count(self) -> int:
        return self.freq_count(self.L)

    @property
    def freq_per_leaf(self) -> int:
        """Integer frequencies per frequency leaf (the U-factor block height)."""
        return self.K // self.freq_leaf_count

    def freq_count(self, level: int) -> int:
        if not 0 <= level <= self.L:
            raise ValueError(f"level {level} outside 0..{self.L}")
        if level <= self.L_min:
            return 2**level
        if level <= self.L_t:
            return 2**self.L_min
        return 2 ** (level - self.L_t + self.L_min)

    def time_count(self, level: int) -> int:
        """Number of time domains paired with frequency level `level`."""
        return 2 ** (self.L - level)

    # -- domains -----------------------------------------------------------
    def time_domain(self, level: int, j: int) -> Interval:
        if not 0 <= j < 2**level:
            raise ValueError(f"time index {j} outside 0..{2**level - 1}")
        w = 2.0**-level
        return Interval(j * w, (j + 1) * w)

    def freq_domain(self, level: int, i: int) -> Interval:
        n = self.freq_count(level)
        if not 0 <= i < n:
            raise ValueError(f"frequency index {i} outside 0..{n - 1}")
        w = self.K / n
        return Interval(self.K0 + i * w, self.K0 + (i + 1) * w)

    def domain(self, level: int, side: str, index: int) -> Interval:
        if side == "time":
            return self.time_domain(level, index)
        if side == "frequency":
            return self.freq_domain(level, index)
        raise ValueError("side must be 'time' or 'frequency'")

    def time_points(self) -> np.ndarray:
        """Uniform sample points t_q = q/N, q = 0..N-1."""
        return np.arange(self.N) / self.N

    def freq_points(self) -> np.ndarray:
        """Output frequencies K0, K0+1, ..., K0+K-1."""
        return self.K0 + np.arange(self.K)


def build_geometry(N: int, K: int, K0: int, L: int, L_xi: int, r: int) -> Geometry:
    if not _is_pow2(N) or not _is_pow2(K):
        raise ValueError("N and K must be powers of two")
    if K > N:
        raise ValueError("K must not exceed N")
    if K0 < 0:
        raise ValueError("K0 must be nonnegative")
    if r < 1:
        raise ValueError("r must be a positive integer")
    logK = K.bit_length() - 1
    logN = N.bit_length() - 1
    if L > logN:
        raise ValueError(f"L={L} exceeds log2 N = {logN}")
    if not 0 <= L_xi <= logK:
        raise ValueError(f"L_xi={L_xi} outside 0..log2 K = {logK}")
    L_t = L - L_xi
    if L_t < 0:
        raise ValueError("L_xi exceeds L")
    L_min = min(L_t, logK - L_xi)
    admissible = math.pi * math.e * K <= r * 2 ** min(L, logK)
    layouts = []
    geo = Geometry(N, K, K0, L, L_t, L_xi, L_min, r, admissible, ())
    for level in range(L + 1):
        fc = geo.freq_count(level)
        tc = 2 ** (L - level)
        layouts.append(
            LayerLayout(level, fc, K / fc, tc, 2.0 ** -(L - level))
        )
    return Geometry(N, K, K0, L, L_t, L_xi, L_min, r, admissible, tuple(layouts))
