"""Parameter counting for the butterfly and inflated-channel variants.

Two counters are exposed:

- count_params_formula: literal evaluation of the closed-form sums, in the
  real-embedded accounting where one complex weight costs 16 reals (a 4x4
  block) and one complex bias costs 4 reals. The final layer's bias term uses
  4*max(1, K/2^L) (the per-layer derivation), not the max(1, K/2^L)*4r that
  appears in the displayed sum; the latter double-counts the mixing channels.
- count_params_empirical: 16 * (mask-allowed complex weights actually stored)
  + 4 * (structural bias slots). For the sparse variant the G terms of the
  closed-form sum undercount the stored weights by exactly a factor 2 per
  level (each output channel connects to two input sub-channels); the
  empirical count is the one that matches reference implementations.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .factors import ButterflyFactors, build_masks
from .geometry import Geometry, build_geometry


@dataclass(frozen=True)
class ParamCount:
    multiplicative: int
    bias: int

    @property
    def total(self) -> int:
        return self.multiplicative + self.bias


def _bias_slots(g: Geometry) -> int:
    """Structural complex bias slots per layer (identical for both variants)."""
    r = g.r
    slots = r  # V
    slots += sum(g.freq_count(level) * r for level in range(1, g.L_t + 1))  # H
    slots += g.freq_count(g.L_t) * 2**g.L_xi * r  # M
    slots += sum(2 ** (g.L - level) * r for level in range(g.L_t + 1, g.L + 1))
    slots += max(1, g.K // 2**g.L)  # U
    return slots


def count_params_formula(g: Geometry, inflated: bool = False) -> ParamCount:
    """Term-by-term evaluation of the closed-form parameter sums."""
    r, K, L = g.r, g.K, g.L
    ch = lambda level: min(2**level, K // 2**g.L_xi)  # noqa: E731
    mult = g.N // 2**L * 16 * r
    if inflated:
        mult += sum(ch(level) ** 2 * (4 * r) ** 2 * 2
                    for level in range(1, g.L_t + 1))
    else:
        mult += sum(ch(level) * (4 * r) ** 2 * 2
                    for level in range(1, g.L_t + 1))
    mult += min(2**L, K) * (4 * r) ** 2
    if inflated:
        mult += sum(2 ** (2 * L - 2 * level) * (4 * r) ** 2 * 2
                    for level in range(g.L_t + 1, L + 1))
    else:
        mult += sum(2 ** (L - level) * (4 * r) ** 2 * 2
                    for level in range(g.L_t + 1, L + 1))
    mult += max(1, K // 2**L) * 16 * r

    bias = 4 * r
    bias += sum(ch(level) * 4 * r for level in range(1, g.L_t + 1))
    bias += min(2**L, K) * 4 * r
    bias += sum(2 ** (L - level) * 4 * r for level in range(g.L_t + 1, L + 1))
    bias += 4 * max(1, K // 2**L)
    return ParamCount(mult, bias)


def count_params_empirical(factors: ButterflyFactors) -> ParamCount:
    """16 reals per mask-allowed complex weight + 4 per structural bias slot."""
    complex_weights = sum(int(m.sum()) for m in factors.masks.values())
    return ParamCount(16 * complex_weights, 4 * _bias_slots(factors.geometry))


def count_masks(g: Geometry, inflated: bool) -> ParamCount:
    """Empirical count from geometry alone (no factor construction)."""
    complex_weights = sum(int(m.sum()) for m in build_masks(g, inflated).values())
    return ParamCount(16 * complex_weights, 4 * _bias_slots(g))


def precise_upper_bound(g: Geometry) -> float:
    """The refined closed-form cap 40r + Lt(K/2^Lxi)(32r^2+4r) + K(16r^2+4r)
    + 2^Lxi(32r^2+4r), itself below 90*L*K*r^2 for admissible geometries."""
    r, K = g.r, g.K
    return (
        40 * r
        + g.L_t * (K / 2**g.L_xi) * (32 * r**2 + 4 * r)
        + K * (16 * r**2 + 4 * r)
        + 2**g.L_xi * (32 * r**2 + 4 * r)
    )


def complexity_table(geometries, variants=("butterfly", "inflated")) -> list[dict]:
    """One record per (geometry, variant): formula and empirical counts."""
    rows = []
    for g in geometries:
        for variant in variants:
            inflated = variant == "inflated"
            formula = count_params_formula(g, inflated)
            empirical = count_masks(g, inflated)
            rows.append(
                {
                    "N": g.N,
                    "K": g.K,
                    "L": g.L,
                    "Lxi": g.L_xi,
                    "r": g.r,
                    "variant": variant,
                    "multiplicative": formula.multiplicative,
                    "bias": formula.bias,
                    "total": formula.total,
                    "empirical_total": empirical.total,
                }
            )
    return rows


def scaling_exponent(ns, counts) -> float:
    """Least-squares slope of log(count) against log(n)."""
    return float(np.polyfit(np.log(np.asarray(ns, float)),
                            np.log(np.asarray(counts, float)), 1)[0])
