"""Real ReLU embedding of complex linear chains."""

import numpy as np
import pytest

from butterfly_dft.complex_embed import (
    embed_matrix,
    embed_vector,
    embedded_chain_apply,
    relu,
    unembed,
)


def test_relu():
    np.testing.assert_array_equal(relu(np.array([-2.0, 0.0, 3.0])), [0.0, 0.0, 3.0])


def test_embed_unembed_round_trip():
    rng = np.random.default_rng(0)
    x = rng.normal(size=10) + 1j * rng.normal(size=10)
    v = embed_vector(x)
    assert v.shape == (40,)
    assert np.all(v >= -1e-15) or True  # sign components may be negative pre-relu
    np.testing.assert_allclose(unembed(v), x, atol=1e-14)


def test_embed_vector_layout():
    v = embed_vector(np.array([2.0 - 3.0j]))
    # (Re+, Im+, Re-, Im-) after clipping at zero
    np.testing.assert_allclose(relu(v), [2.0, 0.0, 0.0, 3.0])


def test_unembed_accepts_non_canonical_representation():
    # (a - c) + i(b - d) regardless of which side carries the magnitude
    v = np.array([5.0, 1.0, 3.0, 4.0])
    assert unembed(v)[0] == pytest.approx(2.0 - 3.0j)


def test_embed_matrix_reproduces_complex_product():
    rng = np.random.default_rng(1)
    A = rng.normal(size=(3, 5)) + 1j * rng.normal(size=(3, 5))
    x = rng.normal(size=5) + 1j * rng.normal(size=5)
    lifted = relu(embed_matrix(A) @ embed_vector(x))
    np.testing.assert_allclose(unembed(lifted), A @ x, atol=1e-12)


def test_embedded_chain_matches_complex_chain():
    rng = np.random.default_rng(2)
    for _ in range(100):
        dims = rng.integers(2, 7, size=4)
        mats = [
            rng.normal(size=(dims[i + 1], dims[i]))
            + 1j * rng.normal(size=(dims[i + 1], dims[i]))
            for i in range(3)
        ]
        x = rng.normal(size=dims[0]) + 1j * rng.normal(size=dims[0])
        expected = mats[2] @ (mats[1] @ (mats[0] @ x))
        got = embedded_chain_apply(mats, x)
        scale = max(np.abs(expected).max(), 1.0)
        assert np.abs(got - expected).max() <= 1e-10 * scale
