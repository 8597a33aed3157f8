from pathlib import Path
from typing import Optional, Sequence, Union
import logging
import pandas as pd

from app.core.exceptions import ConfigurationError, ResourceNotFoundError
from app.schemas.shs import TraceEvent
from app.schemas.sweep import SchemeGain, SweepResult, ValidationReport

logger = logging.getLogger(__name__)

FLOAT_FORMAT = "%.9g"

CURVE_COLUMNS = ["altitude_m", "scheme", "power_w", "value"]
PER_USER_COLUMNS = ["altitude_m", "scheme", "power_w", "user_id", "rho", "aaomi_s"]
GAIN_COLUMNS = ["altitude_m", "power_w", "accuracy_gain_pct", "aaomi_reduction_pct", "compliance_gain"]
VALIDATION_COLUMNS = [
    "altitude_m", "scheme", "power_w", "user_id",
    "closed_form_s", "simulated_s", "std_error_s", "relative_deviation",
]
TRACE_COLUMNS = ["t", "q", "alpha0", "alpha1", "event"]

# Файл -> поле строки развертки
CURVES = {
    "accuracy.csv": "mean_accuracy",
    "aaomi.csv": "network_aaomi_s",
    "compliance.csv": "compliance_ratio",
}
PER_USER_FILE = "per_user.csv"
GAINS_FILE = "gains.csv"
VALIDATION_FILE = "validation.csv"
RESULT_FORMATS = {"csv"}


class ResultService:
    """
    Запись результатов в CSV. Порядок строк - порядок SweepResult (altitude, scheme, power),
    числа с 9 значащими цифрами, поэтому повторный запуск дает побайтово тот же файл.
    """

    @staticmethod
    def _write(frame: pd.DataFrame, path: Path) -> Path:
        frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        logger.info(f"Written {len(frame)} rows to {path}")
        return path

    @staticmethod
    def emit_results(
        result: SweepResult,
        out_dir: Union[str, Path],
        gains: Optional[Sequence[SchemeGain]] = None,
        format: str = "csv",
    ) -> dict[str, Path]:
        """Кривые, значения по пользователям и выигрыши схем; поддерживается только CSV"""
        if format not in RESULT_FORMATS:
            raise ConfigurationError(f"Unsupported result format '{format}', expected one of {sorted(RESULT_FORMATS)}")
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        written = {}

        for filename, field in CURVES.items():
            frame = pd.DataFrame(
                [(r.altitude_m, r.scheme, r.power_w, getattr(r, field)) for r in result.rows],
                columns=CURVE_COLUMNS,
            )
            written[filename] = ResultService._write(frame, out_dir / filename)

        per_user = pd.DataFrame(
            [
                (r.altitude_m, r.scheme, r.power_w, u.user_id, u.rho, u.aaomi)
                for r in result.rows
                for u in r.users
            ],
            columns=PER_USER_COLUMNS,
        )
        written[PER_USER_FILE] = ResultService._write(per_user, out_dir / PER_USER_FILE)

        if gains is not None:
            frame = pd.DataFrame([g.model_dump() for g in gains], columns=GAIN_COLUMNS)
            written[GAINS_FILE] = ResultService._write(frame, out_dir / GAINS_FILE)
        return written

    @staticmethod
    def emit_validation(report: ValidationReport, out_dir: Union[str, Path]) -> Path:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        frame = pd.DataFrame([e.model_dump() for e in report.entries], columns=VALIDATION_COLUMNS)
        return ResultService._write(frame, out_dir / VALIDATION_FILE)

    @staticmethod
    def emit_trace(events: Sequence[TraceEvent], path: Union[str, Path]) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame = pd.DataFrame(
            [(e.t, e.q, e.alpha0, e.alpha1, e.event) for e in events],
            columns=TRACE_COLUMNS,
        )
        return ResultService._write(frame, path)

    @staticmethod
    def read_table(out_dir: Union[str, Path], name: str) -> pd.DataFrame:
        path = Path(out_dir) / name
        if not path.is_file():
            raise ResourceNotFoundError(f"Result file not found: {path}")
        return pd.read_csv(path)
