from pydantic import BaseModel, ConfigDict, Field, model_validator


class ShsParameters(BaseModel):
    """Входы SHS-модели одного пользователя. ρ = 1 допускается для предельных проверок."""
    model_config = ConfigDict(frozen=True)

    arrival_rate: float = Field(gt=0, description="λ_I, 1/с")
    success_prob: float = Field(gt=0, le=1, description="ρ_u")
    total_delay: float = Field(gt=0, description="D_total, с")


class ShsSolution(BaseModel):
    model_config = ConfigDict(frozen=True)

    pi0: float
    pi1: float
    v00: float
    v01: float
    v10: float
    v11: float
    aaomi: float
    residual: float = Field(0.0, ge=0, description="max |M·v - b|")

    @model_validator(mode="after")
    def check_solution(self):
        if abs(self.pi0 + self.pi1 - 1.0) > 1e-12:
            raise ValueError("stationary probabilities must sum to 1")
        return self


class ComplianceReport(BaseModel):
    threshold: float = Field(gt=0)
    per_user_aaomi: list[float]
    compliance_ratio: float = Field(ge=0, le=1)
    compliant_users: int = Field(ge=0)
    network_aaomi: float


class ComplianceRequest(BaseModel):
    per_user_aaomi: list[float] = Field(min_length=1)
    threshold: float = Field(gt=0)


class SimResult(BaseModel):
    time_avg_aomi: float = Field(ge=0)
    std_error: float = Field(ge=0)
    occupancy: tuple[float, float]
    occupancy_std_error: float = Field(ge=0)
    event_counts: dict[str, int]
    horizon: float
    warmup: float
    seed: int

    @model_validator(mode="after")
    def check_occupancy(self):
        if abs(sum(self.occupancy) - 1.0) > 1e-9:
            raise ValueError("occupancy fractions must sum to 1")
        return self


class TraceEvent(BaseModel):
    """Строка трассы: состояние после события и α0 непосредственно перед скачком"""
    t: float
    q: int
    alpha0_before: float
    alpha0: float
    alpha1: float
    event: str


class ShsState(BaseModel):
    """Текущее состояние траектории: режим q, AoMI α0, возраст передаваемого изображения α1, время t"""
    mode: int = Field(ge=0, le=1)
    age_current: float = Field(ge=0)
    age_pending: float = Field(ge=0)
    clock: float = Field(ge=0)
