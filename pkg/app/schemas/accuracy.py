from enum import Enum
from typing import Optional
from pydantic import BaseModel, ConfigDict, Field, model_validator


class ProfileKind(str, Enum):
    PARAMETRIC_SIGMOID = "parametric-sigmoid"
    TABULATED = "tabulated"


class AccuracyProfile(BaseModel):
    """
    Зависимость вероятности правильной классификации от SNR.
    Заменяет обученный классификатор: параметрическая сигмоида или измеренная таблица.
    """
    model_config = ConfigDict(frozen=True)

    kind: ProfileKind = ProfileKind.PARAMETRIC_SIGMOID
    floor: float = Field(0.0, ge=0, le=1, description="Уровень случайного угадывания")
    ceiling: float = Field(1.0, ge=0, le=1)
    midpoint_snr: float = Field(0.0, description="dB")
    slope: float = Field(1.0, ge=0, description="1/dB")
    table: tuple[tuple[float, float], ...] = ()
    source: Optional[str] = Field(None, description="Путь к CSV, если таблица загружена из файла")

    @model_validator(mode="after")
    def check_profile(self):
        if self.floor > self.ceiling:
            raise ValueError(f"floor ({self.floor}) must not exceed ceiling ({self.ceiling})")
        if self.kind == ProfileKind.TABULATED:
            if len(self.table) < 2:
                raise ValueError("tabulated profile needs at least 2 rows")
            snrs = [row[0] for row in self.table]
            if any(b <= a for a, b in zip(snrs, snrs[1:])):
                raise ValueError("tabulated snr_db must be strictly increasing")
            if any(not 0.0 <= row[1] <= 1.0 for row in self.table):
                raise ValueError("tabulated accuracies must lie in [0, 1]")
        return self


class UserAccuracy(BaseModel):
    model_config = ConfigDict(frozen=True)

    user_id: int
    scheme: str
    rho: float = Field(ge=0, lt=1)
    sample_count: int = Field(ge=1)
    std_error: float = Field(ge=0)
