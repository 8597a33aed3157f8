import pandas as pd

from app.cli import EXIT_CONFIG, EXIT_FAILED, EXIT_OK, main
from tests.conftest import DEFAULT_SCENARIO, MEASURED_SCENARIO


def test_sweep_command(tmp_path):
    code = main(["sweep", "--scenario", str(MEASURED_SCENARIO), "--seed", "3", "--out", str(tmp_path)])
    assert code == EXIT_OK
    for name in ("accuracy.csv", "aaomi.csv", "compliance.csv", "per_user.csv", "gains.csv"):
        assert (tmp_path / name).is_file()
    assert len(pd.read_csv(tmp_path / "aaomi.csv")) == 2 * 2 * 5


def test_sweep_missing_scenario(tmp_path):
    assert main(["sweep", "--scenario", str(tmp_path / "none.toml"), "--out", str(tmp_path)]) == EXIT_CONFIG


def test_validate_command_fails_tight_tolerance(tmp_path):
    """Недостижимый допуск: код 1, validation.csv все равно записан"""
    code = main([
        "validate", "--scenario", str(DEFAULT_SCENARIO), "--out", str(tmp_path),
        "--tolerance", "1e-9", "--horizon", "500", "--powers", "1",
    ])
    assert code == EXIT_FAILED
    assert len(pd.read_csv(tmp_path / "validation.csv")) == 2 * 2 * 1 * 5


def test_validate_command_bad_tolerance(tmp_path):
    assert main(["validate", "--out", str(tmp_path), "--tolerance", "0"]) == EXIT_CONFIG


def test_trace_command(tmp_path):
    out = tmp_path / "trace.csv"
    code = main([
        "trace", "--success-prob", "0.5", "--total-delay", "0.1",
        "--horizon", "50", "--seed", "1", "--out", str(out),
    ])
    assert code == EXIT_OK
    frame = pd.read_csv(out)
    assert list(frame.columns) == ["t", "q", "alpha0", "alpha1", "event"]


def test_trace_command_invalid_parameters(tmp_path):
    code = main([
        "trace", "--success-prob", "1.5", "--total-delay", "0.1", "--out", str(tmp_path / "t.csv"),
    ])
    assert code == EXIT_CONFIG
