"""Energy functionals and the quadratic readout layer."""

import numpy as np
import pytest

from butterfly_dft.dataset import DatasetSpec, generate
from butterfly_dft.factors import butterfly_init
from butterfly_dft.functional import (
    SquareSumLayer,
    energy_e1,
    energy_e2,
    exact_weights,
    functional_from_features,
    square_sum_apply,
    train_square_sum,
)
from butterfly_dft.geometry import build_geometry
from butterfly_dft.metrics import rel_error
from butterfly_dft.training import TrainConfig


def test_energy_e1_single_mode():
    # x = cos(2 pi k0 t): unitary spectrum has two bins of height sqrt(N)/2.
    N, k0 = 64, 3
    t = np.arange(N) / N
    x = np.cos(2 * np.pi * k0 * t)
    # Only the +k0 bin falls inside the window; its unitary height is
    # sqrt(N)/2 (the -k0 image sits at N - k0, outside 0..K).
    expected = (2.0 / k0**2) * (np.sqrt(N) / 2) ** 2
    assert energy_e1(x, 16) == pytest.approx(expected)


def test_energy_e2_is_shifted_e1():
    rng = np.random.default_rng(0)
    N = 128
    x = rng.normal(size=N)
    # e2 over [K0, K0+K) weights bin K0+k by 2/k^2, skipping k=0.
    spectrum = np.fft.fft(x) / np.sqrt(N)
    K0, K = 16, 32
    manual = sum(
        2.0 / k**2 * abs(spectrum[K0 + k]) ** 2 for k in range(1, K)
    )
    assert energy_e2(x, K0, K) == pytest.approx(manual)


def test_energy_e1_equals_e2_at_zero_offset():
    rng = np.random.default_rng(1)
    x = rng.normal(size=64)
    assert energy_e1(x, 16) == pytest.approx(energy_e2(x, 0, 16))


def test_energy_rejects_complex_input():
    with pytest.raises((TypeError, ValueError)):
        energy_e1(np.ones(8) * 1j, 4)


def test_energy_scale_law():
    rng = np.random.default_rng(2)
    x = rng.normal(size=64)
    assert energy_e1(3.0 * x, 16) == pytest.approx(9.0 * energy_e1(x, 16))


def test_exact_weights():
    w = exact_weights(8)
    assert w[0] == 0.0
    np.testing.assert_allclose(w[1:], 2.0 / np.arange(1, 8) ** 2)


def test_square_sum_layer_apply():
    layer = SquareSumLayer(np.array([0.0, 1.0, 2.0]))
    feats = np.array([5.0, 2.0, 1.0])
    assert square_sum_apply(layer, feats) == pytest.approx(1 * 4 + 2 * 1)


def test_exact_layer_on_oracle_features_reproduces_energy():
    from butterfly_dft.oracle import oracle_apply

    g = build_geometry(N=128, K=32, K0=0, L=4, L_xi=1, r=4)
    rng = np.random.default_rng(3)
    layer = SquareSumLayer.exact(32)
    for _ in range(10):
        x = rng.normal(size=128)
        feats = oracle_apply(g, x) / np.sqrt(g.N)
        assert float(layer.apply(feats)) == pytest.approx(
            energy_e1(x, 32), abs=1e-12
        )


def test_functional_from_butterfly_features_close():
    g = build_geometry(N=256, K=32, K0=0, L=6, L_xi=1, r=8)
    f = butterfly_init(g)
    eps2 = rel_error(f, 2)
    rng = np.random.default_rng(4)
    for _ in range(5):
        x = rng.normal(size=g.N)
        x /= np.linalg.norm(x)
        gap = abs(functional_from_features(f, x) - energy_e1(x, g.K))
        assert gap <= 10.0 * eps2


def test_train_square_sum_improves_perturbed_weights():
    g = build_geometry(N=128, K=16, K0=0, L=4, L_xi=1, r=4)
    f = butterfly_init(g)
    spec = DatasetSpec(N=128, g_center=0, g_width=4, K0=0, K=16, seed=5, count=64)
    X, _ = generate(spec)
    targets = np.array([energy_e1(x, 16) for x in X])
    rng = np.random.default_rng(6)
    start = SquareSumLayer(exact_weights(16) * rng.uniform(0.5, 1.5, 16))
    cfg = TrainConfig(max_iters=400, lr_init=1e-2, lr_decay_rate=1.0)
    trained, report = train_square_sum(f, (X, targets), cfg, layer=start)
    assert not report["diverged"]
    assert report["post_rel_error"] < report["pre_rel_error"]
    assert report["post_rel_error"] < 0.05
