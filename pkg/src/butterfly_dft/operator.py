"""Matrix-free application of the factor chain in O(N log N).

States are arrays with a leading batch axis: (batch, n_channel, n_block, r).
Before the switch the channel axis is frequency and the block axis time;
after the switch the roles are exchanged (see factors module docstring).
"""

from __future__ import annotations

import functools

import numpy as np

from .geometry import Geometry

_einsum = functools.partial(np.einsum, optimize=True)


def state_dims(g: Geometry, name: str) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(input dims, output dims) of one factor, excluding the batch axis."""
    r = g.r
    if name == "V":
        return (g.N,), (1, 2**g.L, r)
    if name == "M":
        return (g.freq_count(g.L_t), 2**g.L_xi, r), (
            2**g.L_xi, g.freq_count(g.L_t), r)
    if name == "U":
        return (1, g.freq_leaf_count, r), (g.K,)
    level = int(name[1:])
    if name.startswith("H"):
        return (g.freq_count(level - 1), 2 ** (g.L - level + 1), r), (
            g.freq_count(level), 2 ** (g.L - level), r)
    if name.startswith("G"):
        return (2 ** (g.L - level + 1), g.freq_count(level - 1), r), (
            2 ** (g.L - level), g.freq_count(level), r)
    raise ValueError(f"unknown factor {name}")


def layer_apply(factors, name: str, state: np.ndarray) -> np.ndarray:
    """Apply one factor to a batch of states (batch axis leading)."""
    g = factors.geometry
    r = g.r
    if name == "V":
        xb = state.reshape(state.shape[0], 2**g.L, g.time_block)
        out = _einsum("kq,bjq->bjk", factors.V, xb)
        return out[:, None, :, :]
    if name == "M":
        return _einsum("ijks,bijs->bjik", factors.M, state)
    if name == "U":
        y = _einsum("pk,bik->bip", factors.U, state[:, 0])
        return y.reshape(state.shape[0], g.K)
    level = int(name[1:])
    if name.startswith("H"):
        W = factors.H[level - 1]
        nj_out = state.shape[2] // 2
        sin = state.reshape(state.shape[:2] + (nj_out, 2, r))
        return _einsum("pikcs,bijcs->bpjk", W, sin)
    if name.startswith("G"):
        W = factors.G[level - g.L_t - 1]
        out = _einsum("jqaks,bqis->bjiak", W, state)
        return out.reshape(out.shape[0], out.shape[1], -1, r)
    raise ValueError(f"unknown factor {name}")


def layer_backward(
    factors, name: str, state_in: np.ndarray, adjoint: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """One factor's (weight gradient conjugate, input adjoint).

    `adjoint` is d(loss)/d(conj(output)); the returned weight array is
    d(loss)/d(conj(W)), and the returned state is d(loss)/d(conj(input)).
    """
    g = factors.geometry
    r = g.r
    if name == "V":
        xb = state_in.reshape(state_in.shape[0], 2**g.L, g.time_block)
        lam = adjoint[:, 0]
        gW = _einsum("bjk,bjq->kq", lam, xb.conj())
        lam_in = _einsum("kq,bjk->bjq", factors.V.conj(), lam)
        return gW, lam_in.reshape(state_in.shape)
    if name == "M":
        gW = _einsum("bjik,bijs->ijks", adjoint, state_in.conj())
        lam_in = _einsum("ijks,bjik->bijs", factors.M.conj(), adjoint)
        return gW, lam_in
    if name == "U":
        lam = adjoint.reshape(adjoint.shape[0], g.freq_leaf_count, g.freq_per_leaf)
        gW = _einsum("bip,bik->pk", lam, state_in[:, 0].conj())
        lam_in = _einsum("pk,bip->bik", factors.U.conj(), lam)
        return gW, lam_in[:, None, :, :]
    level = int(name[1:])
    if name.startswith("H"):
        W = factors.H[level - 1]
        nj_out = state_in.shape[2] // 2
        sin = state_in.reshape(state_in.shape[:2] + (nj_out, 2, r))
        gW = _einsum("bpjk,bijcs->pikcs", adjoint, sin.conj())
        lam_in = _einsum("pikcs,bpjk->bijcs", W.conj(), adjoint)
        return gW, lam_in.reshape(state_in.shape)
    if name.startswith("G"):
        W = factors.G[level - g.L_t - 1]
        lam = adjoint.reshape(
            adjoint.shape[0], adjoint.shape[1], adjoint.shape[2] // 2, 2, r)
        gW = _einsum("bjiak,bqis->jqaks", lam, state_in.conj())
        lam_in = _einsum("jqaks,bjiak->bqis", W.conj(), lam)
        return gW, lam_in
    raise ValueError(f"unknown factor {name}")


def forward(factors, X: np.ndarray, keep_states: bool = False):
    """Run the chain on a batch. Returns (Y, cached inputs per factor)."""
    g = factors.geometry
    X = np.asarray(X)
    if X.ndim == 1:
        X = X[None, :]
    if X.shape[1] != g.N:
        raise ValueError(f"expected inputs of length {g.N}, got {X.shape[1]}")
    state = X.astype(complex, copy=False)
    cache = {}
    for name in factors.factor_names():
        if keep_states:
            cache[name] = state
        state = layer_apply(factors, name, state)
    return state, cache


def apply(factors, x: np.ndarray) -> np.ndarray:
    """y = U G ... M H ... V x, never materializing the dense matrix."""
    x = np.asarray(x)
    if x.ndim != 1:
        raise ValueError("apply takes a single vector; use apply_batch")
    y, _ = forward(factors, x)
    return y[0]


def apply_batch(factors, X: np.ndarray) -> np.ndarray:
    """Row-wise application; row b of the result is apply(factors, X[b])."""
    X = np.asarray(X)
    if X.ndim != 2:
        raise ValueError("apply_batch takes a 2-D array (batch, N)")
    y, _ = forward(factors, X)
    return y
