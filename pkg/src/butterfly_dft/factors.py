"""Construction, storage, and materialization of the butterfly factor chain.

The operator is the product  y = U * G_L ... G_{Lt+1} * M * H_Lt ... H_1 * V * x.

Intermediate states carry three indices (channel, block, mixing):
before the switch the state at level l is indexed [i, j, k] with i a frequency
channel (freq_count(l) of them), j a time block (2^(L-l)), k one of r mixing
slots; flattened index i*(n_j*r) + j*r + k. The switch factor M transposes the
roles, and after it states are indexed [j, i, k] (time channel outer).

Factor storage:
  V : (r, m)                     one shared block, m = N / 2^L
  H : (n_out, n_in, r, 2, r)     per level, axes (i_out, i_in, k, c, s);
                                 c selects one of the two child time blocks
  M : (n_i, n_j, r, r)           axes (i, j, k, s)
  G : (nj_out, nj_in, 2, r, r)   per level, axes (j, j_in, a, k, s);
                                 a selects one of the two child freq blocks
  U : (m_out, r)                 one shared block, m_out frequencies per leaf

H and G are stored dense across channel pairs with boolean masks: the
butterfly mask allows only parent/child channel connections, the inflated
mask allows all of them. V, M, U have all-true masks in both variants.
"""

from __future__ import annotations

import io
import json
from dataclasses import dataclass, field

import numpy as np

from . import oracle
from .chebyshev import cheb_points, lagrange_basis
from .geometry import Geometry

FORMAT_VERSION = 1


@dataclass
class ButterflyFactors:
    geometry: Geometry
    V: np.ndarray
    H: list[np.ndarray]
    M: np.ndarray
    G: list[np.ndarray]
    U: np.ndarray
    masks: dict[str, np.ndarray] = field(repr=False)
    init_kind: str = "butterfly"
    inflated: bool = False

    def factor_names(self) -> list[str]:
        g = self.geometry
        return (
            ["V"]
            + [f"H{l}" for l in range(1, g.L_t + 1)]
            + ["M"]
            + [f"G{l}" for l in range(g.L_t + 1, g.L + 1)]
            + ["U"]
        )

    def weights(self) -> dict[str, np.ndarray]:
        """All weight arrays keyed like the masks."""
        g = self.geometry
        out = {"V": self.V, "M": self.M, "U": self.U}
        for idx, W in enumerate(self.H):
            out[f"H{idx + 1}"] = W
        for idx, W in enumerate(self.G):
            out[f"G{g.L_t + 1 + idx}"] = W
        return out

    def mask_contained(self) -> bool:
        """True if every nonzero weight sits on an allowed mask slot."""
        for name, W in self.weights().items():
            if np.any((W != 0) & ~self.masks[name]):
                return False
        return True

    def copy(self) -> "ButterflyFactors":
        return ButterflyFactors(
            self.geometry,
            self.V.copy(),
            [W.copy() for W in self.H],
            self.M.copy(),
            [W.copy() for W in self.G],
            self.U.copy(),
            {k: v.copy() for k, v in self.masks.items()},
            self.init_kind,
            self.inflated,
        )


# ---------------------------------------------------------------------------
# shapes and masks


def _h_channels(g: Geometry, level: int) -> tuple[int, int]:
    return g.freq_count(level), g.freq_count(level - 1)


def _g_channels(g: Geometry, level: int) -> tuple[int, int]:
    return 2 ** (g.L - level), 2 ** (g.L - level + 1)


def _h_parent(n_out: int, n_in: int, i: int) -> int:
    return i // 2 if n_out == 2 * n_in else i


def factor_shapes(g: Geometry) -> dict[str, tuple[int, ...]]:
    r = g.r
    shapes = {
        "V": (r, g.time_block),
        "M": (g.freq_count(g.L_t), 2**g.L_xi, r, r),
        "U": (g.freq_per_leaf, r),
    }
    for level in range(1, g.L_t + 1):
        n_out, n_in = _h_channels(g, level)
        shapes[f"H{level}"] = (n_out, n_in, r, 2, r)
    for level in range(g.L_t + 1, g.L + 1):
        nj_out, nj_in = _g_channels(g, level)
        shapes[f"G{level}"] = (nj_out, nj_in, 2, r, r)
    return shapes


def build_masks(g: Geometry, inflated: bool) -> dict[str, np.ndarray]:
    masks = {}
    for name, shape in factor_shapes(g).items():
        mask = np.ones(shape, dtype=bool)
        if not inflated and name.startswith("H"):
            n_out, n_in = shape[:2]
            mask[:] = False
            for i in range(n_out):
                mask[i, _h_parent(n_out, n_in, i)] = True
        if not inflated and name.startswith("G"):
            nj_out, nj_in = shape[:2]
            mask[:] = False
            for j in range(nj_out):
                mask[j, 2 * j] = True
                mask[j, 2 * j + 1] = True
        masks[name] = mask
    return masks


# ---------------------------------------------------------------------------
# butterfly initialization


def butterfly_init(g: Geometry, inflated: bool = False) -> ButterflyFactors:
    """Closed-form weights making the chain approximate the dense kernel."""
    r = g.r
    K = oracle.kernel

    # V: interpolate x from the m uniform samples of the first time leaf onto
    # r Chebyshev points, demodulated by the root frequency center.
    m = g.time_block
    B_leaf = g.time_domain(g.L, 0)
    tq = np.arange(m) / g.N
    tk = cheb_points(r, B_leaf)
    xi0 = g.freq_domain(0, 0).center
    V = K(xi0 * (tq[None, :] - tk[:, None])) * lagrange_basis(tk, tq)

    # H levels: transfer Chebyshev coefficients from two child time blocks to
    # their parent, re-centered at each output frequency channel.
    H = []
    for level in range(1, g.L_t + 1):
        n_out, n_in = _h_channels(g, level)
        t_parent = cheb_points(r, g.time_domain(g.L - level, 0))
        W = np.zeros((n_out, n_in, r, 2, r), dtype=complex)
        for c in range(2):
            t_child = cheb_points(r, g.time_domain(g.L - level + 1, c))
            lag = lagrange_basis(t_parent, t_child)  # (k, s)
            for i in range(n_out):
                xi_c = g.freq_domain(level, i).center
                W[i, _h_parent(n_out, n_in, i), :, c, :] = (
                    K(xi_c * (t_child[None, :] - t_parent[:, None])) * lag
                )
        H.append(W)

    # M: switch interpolation from the time variable to the frequency
    # variable; dense r x r kernel samples at Chebyshev points on both sides.
    n_i, n_j = g.freq_count(g.L_t), 2**g.L_xi
    M = np.empty((n_i, n_j, r, r), dtype=complex)
    for i in range(n_i):
        xik = cheb_points(r, g.freq_domain(g.L_t, i))
        for j in range(n_j):
            ts = cheb_points(r, g.time_domain(g.L_xi, j))
            M[i, j] = K(np.outer(xik, ts))

    # G levels: transfer frequency-Chebyshev coefficients from a parent
    # frequency block to its two children; shared across frequency blocks
    # (the kernel depends only on frequency differences) but not across time
    # channels (absolute time centers enter the phase).
    G = []
    for level in range(g.L_t + 1, g.L + 1):
        nj_out, nj_in = _g_channels(g, level)
        xi_parent = cheb_points(r, g.freq_domain(level - 1, 0))
        W = np.zeros((nj_out, nj_in, 2, r, r), dtype=complex)
        for a in range(2):
            xi_child = cheb_points(r, g.freq_domain(level, a))
            lag = lagrange_basis(xi_parent, xi_child)  # (s, k)
            for j in range(nj_out):
                for c in range(2):
                    t_c = g.time_domain(g.L - level + 1, 2 * j + c).center
                    W[j, 2 * j + c, a] = (
                        K((xi_child[:, None] - xi_parent[None, :]) * t_c)
                        * lag.T
                    )
        G.append(W)

    # U: evaluate the frequency interpolant at the integer frequencies of a
    # leaf, modulated back by the root time center; shared across leaves.
    m_out = g.freq_per_leaf
    xik = cheb_points(r, g.freq_domain(g.L, 0))
    xip = g.K0 + np.arange(m_out)
    t0 = g.time_domain(0, 0).center
    U = K((xip[:, None] - xik[None, :]) * t0) * lagrange_basis(xik, xip).T

    return ButterflyFactors(
        g, V, H, M, G, U, build_masks(g, inflated), "butterfly", inflated
    )


# ---------------------------------------------------------------------------
# random initialization


def random_init(g: Geometry, seed: int, inflated: bool = False) -> ButterflyFactors:
    """Mask-respecting complex Gaussian init, entry scale 1/sqrt(fan_in)."""
    rng = np.random.default_rng(seed)
    masks = build_masks(g, inflated)
    r = g.r

    def draw(shape, fan_in, mask=None):
        w = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape))
        w *= 1.0 / np.sqrt(2.0 * fan_in)
        if mask is not None:
            w = np.where(mask, w, 0.0)
        return w

    V = draw((r, g.time_block), g.time_block)
    H = []
    for level in range(1, g.L_t + 1):
        name = f"H{level}"
        n_in_conn = masks[name][0].any(axis=(1, 2, 3)).sum()  # connected channels
        H.append(draw(masks[name].shape, n_in_conn * 2 * r, masks[name]))
    M = draw(masks["M"].shape, r)
    G = []
    for level in range(g.L_t + 1, g.L + 1):
        name = f"G{level}"
        n_in_conn = masks[name][0].any(axis=(1, 2, 3)).sum()
        G.append(draw(masks[name].shape, n_in_conn * r, masks[name]))
    U = draw(masks["U"].shape, r)
    return ButterflyFactors(g, V, H, M, G, U, masks, "random", inflated)


# ---------------------------------------------------------------------------
# inflate / materialize / norms


def inflate(factors: ButterflyFactors) -> ButterflyFactors:
    """Widen masks to the dense-channel pattern; weights are unchanged.

    The materialized operator is exactly preserved: the newly allowed slots
    already hold zeros in the dense storage.
    """
    out = factors.copy()
    out.masks = build_masks(factors.geometry, inflated=True)
    out.inflated = True
    return out


def materialize(factors: ButterflyFactors) -> np.ndarray:
    """Dense K x N matrix of the factor chain."""
    from .operator import apply_batch

    g = factors.geometry
    if g.N * g.K > 2**24:
        raise MemoryError(
            f"dense materialization guard exceeded: N*K = {g.N * g.K} > 2^24"
        )
    return apply_batch(factors, np.eye(g.N, dtype=complex)).T


def layer_matrix(factors: ButterflyFactors, name: str) -> np.ndarray:
    """Dense matrix of a single factor in the flattened state ordering."""
    from .operator import layer_apply, state_dims

    g = factors.geometry
    dims_in, dims_out = state_dims(g, name)
    n_in = int(np.prod(dims_in))
    basis = np.eye(n_in, dtype=complex).reshape((n_in,) + dims_in)
    out = layer_apply(factors, name, basis)
    return out.reshape(n_in, -1).T


def factor_norms(factors: ButterflyFactors) -> list[dict]:
    """Exact 1-norm and inf-norm of every materialized factor."""
    report = []
    for name in factors.factor_names():
        A = np.abs(layer_matrix(factors, name))
        report.append(
            {
                "factor": name,
                "norm1": float(A.sum(axis=0).max()),
                "norminf": float(A.sum(axis=1).max()),
            }
        )
    return report


# ---------------------------------------------------------------------------
# serialization (bit-exact round trip)


def save(factors: ButterflyFactors, path: str) -> None:
    """Write factors to an npz container with a JSON header.

    Layout: `header` (JSON: format version, geometry fields, init_kind,
    inflated flag), then per-factor complex arrays in chain order
    (V, H1..H_Lt, M, G_{Lt+1}..G_L, U) and boolean masks `mask_<name>`.
    """
    g = factors.geometry
    header = {
        "format_version": FORMAT_VERSION,
        "N": g.N,
        "K": g.K,
        "K0": g.K0,
        "L": g.L,
        "L_xi": g.L_xi,
        "r": g.r,
        "init_kind": factors.init_kind,
        "inflated": factors.inflated,
    }
    arrays = {"header": np.frombuffer(json.dumps(header).encode(), dtype=np.uint8)}
    for name, W in factors.weights().items():
        arrays[name] = W
        arrays[f"mask_{name}"] = factors.masks[name]
    with open(path, "wb") as f:
        np.savez(f, **arrays)


def load(path: str) -> ButterflyFactors:
    from .geometry import build_geometry

    with np.load(path) as data:
        header = json.loads(bytes(data["header"]).decode())
        if header["format_version"] != FORMAT_VERSION:
            raise ValueError(f"unsupported format version {header['format_version']}")
        g = build_geometry(
            header["N"], header["K"], header["K0"], header["L"],
            header["L_xi"], header["r"],
        )
        masks = {}
        weights = {}
        for key in data.files:
            if key == "header":
                continue
            if key.startswith("mask_"):
                masks[key[5:]] = data[key]
            else:
                weights[key] = data[key]
    H = [weights[f"H{l}"] for l in range(1, g.L_t + 1)]
    G = [weights[f"G{l}"] for l in range(g.L_t + 1, g.L + 1)]
    return ButterflyFactors(
        g, weights["V"], H, weights["M"], G, weights["U"], masks,
        header["init_kind"], header["inflated"],
    )
