import pytest
import pandas as pd

from app.core.exceptions import ConfigurationError, ResourceNotFoundError
from app.schemas.shs import ShsParameters
from app.schemas.sweep import SweepResult, ValidationEntry, ValidationReport
from app.service.computation.aomi_service import AoMIService
from app.service.computation.shs_simulator import SimulationService
from app.service.experiment_service import ExperimentService
from app.service.IO.result_service import (
    CURVES, GAINS_FILE, PER_USER_FILE, VALIDATION_FILE, ResultService,
)


# --- Формат файлов ---

def test_emit_results_files(tmp_path, small_scenario):
    result = ExperimentService.run_sweep(small_scenario)
    written = ResultService.emit_results(result, tmp_path)

    assert set(written) == set(CURVES) | {PER_USER_FILE}
    for name in CURVES:
        frame = ResultService.read_table(tmp_path, name)
        assert list(frame.columns) == ["altitude_m", "scheme", "power_w", "value"]
        assert len(frame) == len(result.rows)
    per_user = ResultService.read_table(tmp_path, PER_USER_FILE)
    assert list(per_user.columns) == ["altitude_m", "scheme", "power_w", "user_id", "rho", "aaomi_s"]
    assert len(per_user) == len(result.rows) * 3


def test_curve_rows_follow_sweep_order(tmp_path, small_scenario):
    result = ExperimentService.run_sweep(small_scenario)
    ResultService.emit_results(result, tmp_path)
    frame = ResultService.read_table(tmp_path, "aaomi.csv")
    assert list(zip(frame.altitude_m, frame.scheme, frame.power_w)) == [r.key for r in result.rows]
    assert frame.value.tolist() == pytest.approx([r.network_aaomi_s for r in result.rows], rel=1e-8)


def test_compliance_recomputed_from_per_user(tmp_path, default_scenario):
    """Γ из compliance.csv совпадает с Γ, пересчитанным по per_user.csv"""
    result = ExperimentService.run_sweep(default_scenario)
    ResultService.emit_results(result, tmp_path)
    compliance = ResultService.read_table(tmp_path, "compliance.csv")
    per_user = ResultService.read_table(tmp_path, PER_USER_FILE)
    for row in compliance.itertuples(index=False):
        users = per_user[
            (per_user.altitude_m == row.altitude_m)
            & (per_user.scheme == row.scheme)
            & (per_user.power_w == row.power_w)
        ]
        report = AoMIService.compliance_ratio(users.aaomi_s.tolist(), default_scenario.sweep.threshold_s)
        assert report.compliance_ratio == pytest.approx(row.value)


def test_emit_results_byte_identical(tmp_path, default_scenario):
    """Два запуска с одним сценарием и seed дают побайтово одинаковые CSV"""
    gains = None
    for out in ("first", "second"):
        result = ExperimentService.run_sweep(default_scenario)
        gains = ExperimentService.compare_schemes(result, "sscc", "djscc")
        ResultService.emit_results(result, tmp_path / out, gains)
    for name in [*CURVES, PER_USER_FILE, GAINS_FILE]:
        assert (tmp_path / "first" / name).read_bytes() == (tmp_path / "second" / name).read_bytes()


def test_gains_file(tmp_path, default_scenario):
    result = ExperimentService.run_sweep(default_scenario)
    gains = ExperimentService.compare_schemes(result, "sscc", "djscc")
    ResultService.emit_results(result, tmp_path, gains)
    frame = ResultService.read_table(tmp_path, GAINS_FILE)
    assert list(frame.columns) == [
        "altitude_m", "power_w", "accuracy_gain_pct", "aaomi_reduction_pct", "compliance_gain",
    ]
    assert len(frame) == len(gains)


def test_empty_result_writes_headers(tmp_path):
    ResultService.emit_results(SweepResult(threshold_s=2.0), tmp_path)
    assert (tmp_path / "accuracy.csv").read_text() == "altitude_m,scheme,power_w,value\n"
    assert (tmp_path / PER_USER_FILE).read_text() == "altitude_m,scheme,power_w,user_id,rho,aaomi_s\n"


def test_emit_results_only_csv(tmp_path):
    written = ResultService.emit_results(SweepResult(threshold_s=2.0), tmp_path, format="csv")
    assert set(written) == {*CURVES, PER_USER_FILE}
    with pytest.raises(ConfigurationError, match="parquet"):
        ResultService.emit_results(SweepResult(threshold_s=2.0), tmp_path / "other", format="parquet")
    assert not (tmp_path / "other").exists()


def test_emit_validation(tmp_path):
    report = ValidationReport(
        tolerance=0.02,
        horizon=1e6,
        entries=[ValidationEntry(
            altitude_m=400e3, scheme="djscc", power_w=1.0, user_id=0,
            closed_form_s=2.0, simulated_s=2.01, std_error_s=0.004, relative_deviation=0.005,
        )],
        max_relative_deviation=0.005,
        passed=True,
    )
    path = ResultService.emit_validation(report, tmp_path)
    assert path.name == VALIDATION_FILE
    lines = path.read_text().splitlines()
    assert lines[0] == (
        "altitude_m,scheme,power_w,user_id,closed_form_s,simulated_s,std_error_s,relative_deviation"
    )
    assert lines[1] == "400000,djscc,1,0,2,2.01,0.004,0.005"


def test_emit_trace(tmp_path):
    params = ShsParameters(arrival_rate=1.0, success_prob=0.5, total_delay=0.1)
    events = SimulationService.trace(params, 20.0, seed=4)
    path = ResultService.emit_trace(events, tmp_path / "nested" / "trace.csv")
    frame = pd.read_csv(path)
    assert list(frame.columns) == ["t", "q", "alpha0", "alpha1", "event"]
    assert len(frame) == len(events)
    assert frame.event.iloc[0] == "start"
    assert set(frame.q) <= {0, 1}


def test_read_table_missing(tmp_path):
    with pytest.raises(ResourceNotFoundError):
        ResultService.read_table(tmp_path, "aaomi.csv")
