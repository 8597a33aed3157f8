from typing import Optional
from pydantic import BaseModel, Field, model_validator


class UserOutcome(BaseModel):
    user_id: int
    rho: float = Field(ge=0, lt=1)
    rho_std_error: float = Field(0.0, ge=0)
    total_delay: float = Field(gt=0, description="D_total, с")
    aaomi: float = Field(gt=0, description="α_avg, с (inf при ρ = 0)")


class SweepRow(BaseModel):
    """Одна ячейка развертки (altitude, scheme, power)"""
    altitude_m: float
    scheme: str
    power_w: float
    mean_accuracy: float = Field(ge=0, le=1)
    network_aaomi_s: float
    compliance_ratio: float = Field(ge=0, le=1)
    users: list[UserOutcome]

    @property
    def key(self) -> tuple[float, str, float]:
        return self.altitude_m, self.scheme, self.power_w

    @property
    def per_user_aaomi(self) -> list[float]:
        return [u.aaomi for u in self.users]


class SweepResult(BaseModel):
    scenario: str = "scenario"
    master_seed: int = 0
    threshold_s: float = Field(gt=0)
    rows: list[SweepRow] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_rows(self):
        keys = [row.key for row in self.rows]
        if len(set(keys)) != len(keys):
            raise ValueError("duplicate (altitude, scheme, power) rows")
        if keys != sorted(keys):
            raise ValueError("rows must be ordered by (altitude, scheme, power)")
        return self

    def row(self, altitude_m: float, scheme: str, power_w: float) -> Optional[SweepRow]:
        for row in self.rows:
            if row.key == (altitude_m, scheme, power_w):
                return row
        return None


class SchemeGain(BaseModel):
    """Выигрыш candidate относительно baseline в одной точке (altitude, power)"""
    altitude_m: float
    power_w: float
    accuracy_gain_pct: float
    aaomi_reduction_pct: float
    compliance_gain: float


class ValidationEntry(BaseModel):
    altitude_m: float
    scheme: str
    power_w: float
    user_id: int
    closed_form_s: float
    simulated_s: float
    std_error_s: float
    relative_deviation: float = Field(ge=0)


class ValidationReport(BaseModel):
    tolerance: float = Field(gt=0)
    horizon: float = Field(gt=0)
    entries: list[ValidationEntry] = Field(default_factory=list)
    max_relative_deviation: float = Field(ge=0)
    passed: bool
