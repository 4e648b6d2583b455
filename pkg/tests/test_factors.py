"""Factor construction, masks, inflation, norms, serialization."""

import numpy as np
import pytest

from butterfly_dft.chebyshev import lebesgue_bound
from butterfly_dft.factors import (
    build_masks,
    butterfly_init,
    factor_shapes,
    factor_norms,
    inflate,
    layer_matrix,
    load,
    materialize,
    random_init,
    save,
)
from butterfly_dft.geometry import build_geometry
from butterfly_dft.oracle import dense_kernel


SMALL = dict(N=128, K=16, K0=0, L=4, L_xi=1, r=4)


def small_geometry(**overrides):
    params = dict(SMALL, **overrides)
    return build_geometry(**params)


def test_factor_names_order():
    g = small_geometry()
    f = butterfly_init(g)
    names = f.factor_names()
    assert names[0] == "V" and names[-1] == "U"
    assert names.count("M") == 1
    assert len([n for n in names if n.startswith("H")]) == g.L_t
    assert len([n for n in names if n.startswith("G")]) == g.L - g.L_t


def test_shapes_match_declared():
    g = small_geometry()
    f = butterfly_init(g)
    shapes = factor_shapes(g)
    for name, w in f.weights().items():
        assert w.shape == shapes[name]


def test_butterfly_init_deterministic():
    g = small_geometry()
    a, b = butterfly_init(g), butterfly_init(g)
    for name in a.factor_names():
        np.testing.assert_array_equal(a.weights()[name], b.weights()[name])


def test_butterfly_init_within_mask():
    f = butterfly_init(small_geometry())
    assert f.mask_contained()


def test_butterfly_mask_strictly_inside_inflated():
    g = small_geometry()
    narrow = build_masks(g, inflated=False)
    wide = build_masks(g, inflated=True)
    strictly_smaller = False
    for name in narrow:
        assert np.all(wide[name])
        assert np.all(wide[name] | ~narrow[name])
        if narrow[name].sum() < wide[name].size:
            strictly_smaller = True
    assert strictly_smaller


def test_materialize_approximates_dense_kernel():
    g = build_geometry(N=1024, K=64, K0=0, L=5, L_xi=2, r=8)
    B = materialize(butterfly_init(g))
    A = dense_kernel(g)
    rel = np.linalg.norm(B - A, 2) / np.linalg.norm(A, 2)
    assert rel < 5e-3


def test_inflate_preserves_operator_exactly():
    g = small_geometry()
    f = butterfly_init(g)
    fi = inflate(f)
    assert fi.inflated
    np.testing.assert_array_equal(materialize(f), materialize(fi))
    for name, m in fi.masks.items():
        assert np.all(m)


def test_random_init_seeded_and_masked():
    g = small_geometry()
    a = random_init(g, seed=5)
    b = random_init(g, seed=5)
    c = random_init(g, seed=6)
    different = False
    for name in a.factor_names():
        np.testing.assert_array_equal(a.weights()[name], b.weights()[name])
        if not np.array_equal(a.weights()[name], c.weights()[name]):
            different = True
        assert np.all(a.weights()[name][~a.masks[name]] == 0)
    assert different


def test_layer_matrix_chain_equals_materialize():
    g = small_geometry()
    f = butterfly_init(g)
    product = np.eye(g.N, dtype=complex)
    for name in f.factor_names():
        product = layer_matrix(f, name) @ product
    np.testing.assert_allclose(product, materialize(f), atol=1e-12)


@pytest.mark.parametrize(
    "params",
    [
        dict(N=256, K=16, K0=0, L=4, L_xi=1, r=4),
        dict(N=256, K=32, K0=0, L=5, L_xi=2, r=6),
        dict(N=512, K=64, K0=8, L=6, L_xi=1, r=8),
    ],
)
def test_factor_norm_bounds(params):
    g = build_geometry(**params)
    f = butterfly_init(g)
    lam = lebesgue_bound(g.r)
    m_out = max(1, g.K // 2**g.L)
    tol = 1e-9
    for row in factor_norms(f):
        name = row["factor"]
        if name == "V":
            continue  # no closed-form bound for the leaf interpolation
        if name == "U":
            assert row["norm1"] <= m_out * lam + tol
            assert row["norminf"] <= lam + tol
        elif name == "M":
            assert row["norm1"] <= g.r + tol
            assert row["norminf"] <= g.r + tol
        elif name.startswith("H"):
            assert row["norm1"] <= 2 * lam + tol
            assert row["norminf"] <= 2 * g.r * lam + tol
        elif name.startswith("G"):
            assert row["norm1"] <= 2 * g.r * lam + tol
            assert row["norminf"] <= 2 * lam + tol


def test_save_load_round_trip_bit_exact(tmp_path):
    g = small_geometry()
    f = random_init(g, seed=11)
    path = tmp_path / "factors.npz"
    save(f, str(path))
    f2 = load(str(path))
    assert f2.geometry == f.geometry
    assert f2.init_kind == f.init_kind
    assert f2.inflated == f.inflated
    for name in f.factor_names():
        np.testing.assert_array_equal(f.weights()[name], f2.weights()[name])
        np.testing.assert_array_equal(f.masks[name], f2.masks[name])


def test_copy_is_independent():
    f = butterfly_init(small_geometry())
    f2 = f.copy()
    f2.V[0, 0] += 1.0
    assert f.V[0, 0] != f2.V[0, 0]


def test_materialize_guards_against_huge_geometry():
    g = build_geometry(N=2**15, K=2**10, K0=0, L=10, L_xi=1, r=4)
    with pytest.raises(MemoryError):
        materialize(butterfly_init(g))
