"""Command-line interface smoke tests."""

import csv
import io

import pytest

from butterfly_dft.cli import main


def run_cli(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, list(csv.DictReader(io.StringIO(out)))


def test_approx_error_csv(capsys):
    code, rows = run_cli(
        capsys,
        "approx-error", "--n", "256", "--k", "16", "--r", "4",
        "--l", "4,5", "--lxi", "1",
    )
    assert code == 0
    assert len(rows) == 2
    assert {"N", "K", "L", "Lxi", "eps1", "eps2", "epsInf"} <= set(rows[0])
    assert float(rows[1]["eps2"]) < float(rows[0]["eps2"])


def test_complexity_csv(capsys):
    code, rows = run_cli(
        capsys,
        "complexity", "--n", "1024", "--k", "128", "--r", "4",
        "--l", "8", "--lxi", "1", "--variant", "butterfly",
    )
    assert code == 0
    assert len(rows) == 1
    assert int(rows[0]["total"]) == 136004


def test_train_smoke(capsys, tmp_path):
    saved = tmp_path / "net.npz"
    code, rows = run_cli(
        capsys,
        "train", "--n", "64", "--k", "8", "--l", "3", "--lxi", "1", "--r", "3",
        "--g-width", "4", "--iters", "20", "--batch-size", "8",
        "--test-size", "16", "--seed", "1",
        "--save-factors", str(saved),
    )
    assert code == 0
    assert saved.exists()
    metrics = {row["metric"]: row["value"] for row in rows}
    assert float(metrics["pre_train_rel_error"]) > 0
    assert float(metrics["post_train_rel_error"]) > 0
    assert metrics["diverged"] == "false"


def test_train_transfer_sweep(capsys):
    code, rows = run_cli(
        capsys,
        "train", "--n", "64", "--k", "8", "--l", "3", "--lxi", "1", "--r", "3",
        "--g-width", "2", "--iters", "5", "--batch-size", "8",
        "--test-size", "8", "--seed", "1", "--transfer", "0:2:4",
    )
    assert code == 0
    centers = [float(row["g_center"]) for row in rows]
    assert centers == [0.0, 2.0, 4.0]


def test_verify_quick(capsys):
    code, rows = run_cli(capsys, "verify", "--quick")
    assert code == 0
    assert all(row["passed"] == "true" for row in rows)


def test_invalid_geometry_reports_error(capsys):
    code = main(["approx-error", "--n", "100", "--k", "16"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_unknown_command_exits():
    with pytest.raises(SystemExit):
        main(["frobnicate"])
