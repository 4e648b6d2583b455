"""Complex-to-real embedding compatible with ReLU.

A complex scalar x maps to the nonnegative 4-vector
((Re x)_+, (Im x)_+, (Re x)_-, (Im x)_-), and a complex weight a to a 4x4
real block; applying the embedded matrix followed by ReLU reproduces the
embedding of the complex product. Chains of embedded factors with ReLU
between stages therefore compute exactly the complex linear operator.
"""

from __future__ import annotations

import numpy as np


def relu(v: np.ndarray) -> np.ndarray:
    return np.maximum(v, 0.0)


def embed_vector(x: np.ndarray) -> np.ndarray:
    """Length-4n real layout per complex entry: (Re+, Im+, Re-, Im-)."""
    x = np.atleast_1d(np.asarray(x, dtype=complex))
    parts = np.stack(
        [relu(x.real), relu(x.imag), relu(-x.real), relu(-x.imag)], axis=-1
    )
    return parts.reshape(-1)


def unembed(v: np.ndarray) -> np.ndarray:
    """Inverse map: Re = (Re)+ - (Re)-, Im = (Im)+ - (Im)-.

    Tolerates non-canonical inputs (both halves nonzero)."""
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size % 4:
        raise ValueError("embedded vectors have length 4n")
    q = v.reshape(-1, 4)
    return (q[:, 0] - q[:, 2]) + 1j * (q[:, 1] - q[:, 3])


def embed_matrix(a) -> np.ndarray:
    """4x4 real block per complex entry; blocks tile in both directions."""
    A = np.atleast_2d(np.asarray(a, dtype=complex))
    re, im = A.real, A.imag
    rows = [
        [re, -im, -re, im],
        [im, re, -im, -re],
        [-re, im, re, -im],
        [-im, -re, im, re],
    ]
    m, n = A.shape
    out = np.empty((4 * m, 4 * n))
    for bi in range(4):
        for bj in range(4):
            out[bi::4, bj::4] = rows[bi][bj]
    return out


def embedded_chain_apply(matrices, x: np.ndarray) -> np.ndarray:
    """sigma-interleaved application of embedded complex matrices.

    Computes unembed(sigma(embed(A_m) ... sigma(embed(A_1) embed(x)))),
    which equals A_m ... A_1 x exactly.
    """
    v = embed_vector(x)
    for A in matrices:
        v = relu(embed_matrix(A) @ v)
    return unembed(v)
