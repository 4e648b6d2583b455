"""Synthetic band-limited signal generation."""

import numpy as np
import pytest

from butterfly_dft.dataset import (
    PRESETS,
    DatasetSpec,
    envelope,
    fresh_batch,
    generate,
    to_csv,
    transfer_specs,
)
from butterfly_dft.oracle import window_kernel


def test_generate_shapes_and_types():
    spec = DatasetSpec(N=256, g_center=0, g_width=10, K0=0, K=32, seed=1, count=5)
    X, Y = generate(spec)
    assert X.shape == (5, 256) and Y.shape == (5, 32)
    assert np.isrealobj(X)
    assert np.iscomplexobj(Y)


def test_generate_deterministic():
    spec = DatasetSpec(N=128, g_center=5, g_width=3, K0=0, K=16, seed=9, count=4)
    X1, Y1 = generate(spec)
    X2, Y2 = generate(spec)
    np.testing.assert_array_equal(X1, X2)
    np.testing.assert_array_equal(Y1, Y2)


def test_samples_independent_of_batch_layout():
    # Sample i is a pure function of (seed, i), not of how batches are cut.
    spec = DatasetSpec(N=128, g_center=0, g_width=4, K0=0, K=16, seed=3)
    all_at_once, _ = fresh_batch(spec, 8, 0)
    second_half, _ = fresh_batch(spec, 4, 1)
    np.testing.assert_array_equal(all_at_once[4:], second_half)


def test_targets_are_windowed_transform_of_inputs():
    spec = DatasetSpec(N=128, g_center=4, g_width=5, K0=8, K=16, seed=2, count=3)
    X, Y = generate(spec)
    A = window_kernel(128, 8, 16)
    np.testing.assert_allclose(Y, X @ A.T, atol=1e-10)


def test_energy_concentrates_near_center():
    spec = DatasetSpec(N=256, g_center=20, g_width=4, K0=0, K=64, seed=0, count=50)
    _, Y = generate(spec)
    power = np.mean(np.abs(Y) ** 2, axis=0)
    inside = power[8:33].sum()  # center +- 3 sigma
    assert inside / power.sum() > 0.95


def test_envelope_shape():
    spec = DatasetSpec(N=64, g_center=10, g_width=2, K0=0, K=32)
    env = envelope(spec)
    assert env.shape == (64,)
    assert env.argmax() == 10
    assert env[10] == pytest.approx(1.0)


def test_transfer_specs_shift_center_only():
    base = DatasetSpec(N=256, g_center=0, g_width=10, K0=0, K=32, seed=7, count=10)
    centers = list(range(0, 45, 2))
    specs = transfer_specs(base, centers)
    assert len(specs) == 23
    for i, (s, c) in enumerate(zip(specs, centers)):
        assert s.g_center == c
        assert (s.N, s.g_width, s.K0, s.K, s.count) == (256, 10, 0, 32, 10)
        assert s.seed == base.seed + i


def test_presets_exist_and_build():
    assert set(PRESETS) == {
        "dft-lfreq",
        "dft-hfreq",
        "dftsmooth-lfreq",
        "dftsmooth-hfreq",
    }
    for spec in PRESETS.values():
        assert spec.N == 1024


def test_spec_validation():
    with pytest.raises(ValueError):
        DatasetSpec(N=64, g_center=0, g_width=2, K0=60, K=16)
    with pytest.raises(ValueError):
        DatasetSpec(N=64, g_center=0, g_width=0, K0=0, K=16)


def test_to_csv_round_trippable():
    spec = DatasetSpec(N=64, g_center=1, g_width=2, K0=0, K=8, seed=4, count=2)
    text = to_csv(spec)
    lines = text.strip().splitlines()
    header = lines[0].split(",")
    assert header[0] == "x0" and header[-1] == "y7_im"
    assert len(lines) == 1 + 2
    assert len(header) == 64 + 2 * 8
    X, Y = generate(spec)
    first = np.array([float(v) for v in lines[1].split(",")])
    np.testing.assert_allclose(first[:64], X[0], atol=0)
