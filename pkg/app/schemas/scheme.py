from enum import Enum
from typing import Optional
from pydantic import BaseModel, ConfigDict, Field, model_validator

from app.schemas.accuracy import AccuracyProfile


class SchemeKind(str, Enum):
    DJSCC = "djscc"
    SSCC = "sscc"


class ImageSource(BaseModel):
    model_config = ConfigDict(frozen=True)

    height: int = Field(32, ge=1)
    width: int = Field(32, ge=1)
    channels: int = Field(3, ge=1)
    arrival_rate: float = Field(1.0, gt=0, description="λ_I, изображений/с")

    @property
    def pixel_count(self) -> int:
        return self.height * self.width * self.channels


class SchemeConfig(BaseModel):
    """
    Описание приемопередатчика. Для анализа свежести нужны только число символов,
    задержки и профиль точности.
    """
    model_config = ConfigDict(frozen=True)

    name: str = Field(min_length=1)
    kind: SchemeKind
    downsampling_stages: Optional[int] = Field(None, ge=0)
    feature_channels: Optional[int] = Field(None, ge=1)
    symbol_count: int = Field(ge=1)
    symbol_duration: float = Field(125e-9, gt=0)
    encode_delay: float = Field(0.01, ge=0)
    classify_delay: float = Field(ge=0)
    accuracy_profile: AccuracyProfile

    @model_validator(mode="after")
    def check_djscc_fields(self):
        if self.kind == SchemeKind.DJSCC and (self.downsampling_stages is None or self.feature_channels is None):
            raise ValueError("DJSCC scheme needs downsampling_stages and feature_channels")
        return self
