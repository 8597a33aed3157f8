from typing import Any, Optional
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.core.exceptions import SchemeConfigError
from app.core.units import EARTH_RADIUS_M
from app.schemas.scheme import ImageSource, SchemeConfig
from app.service.computation.scheme_service import SchemeService

SamplingRange = tuple[float, float]


class PopulationSection(BaseModel):
    """Диапазоны равномерной выборки параметров пользователей, (min, max)"""
    model_config = ConfigDict(frozen=True)

    size: int = Field(5, ge=1, description="U")
    elevation_deg: SamplingRange = (20.0, 60.0)
    rain_rate_mmh: SamplingRange = (0.1, 25.0)
    k_factor_db: SamplingRange = (5.0, 15.0)
    satellite_gain_dbi: SamplingRange = (28.0, 32.0)
    user_gain_dbi: SamplingRange = (23.0, 27.0)

    @field_validator("elevation_deg", "rain_rate_mmh", "k_factor_db", "satellite_gain_dbi", "user_gain_dbi")
    @classmethod
    def check_range(cls, value: SamplingRange, info):
        low, high = value
        if low > high:
            raise ValueError(f"{info.field_name}: min {low} exceeds max {high}")
        return value

    @model_validator(mode="after")
    def check_domains(self):
        if not (0 < self.elevation_deg[0] and self.elevation_deg[1] <= 90):
            raise ValueError("elevation_deg must lie in (0, 90]")
        if self.rain_rate_mmh[0] < 0:
            raise ValueError("rain_rate_mmh must be non-negative")
        return self


class ConstantsSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    earth_radius_m: float = Field(EARTH_RADIUS_M, gt=0)
    carrier_frequency_hz: float = Field(20e9, gt=0)
    noise_power_dbm: float = -99.61
    rain_kappa: float = Field(0.075, gt=0)
    rain_beta: float = Field(1.099, gt=0)
    rain_path_coefficient: float = 0.00741
    rain_path_exponent: float = 0.776
    rain_elevation_coefficient: float = 0.232
    rain_elevation_offset: float = 0.00018
    # значения по умолчанию для схем, в которых они не заданы
    symbol_duration_s: float = Field(125e-9, gt=0)
    encode_delay_s: float = Field(0.01, ge=0)


class SweepSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    altitudes_m: list[float] = Field(default_factory=lambda: [400e3, 1000e3], min_length=1)
    power_grid_w: list[float] = Field(min_length=1)
    threshold_s: float = Field(2.0, gt=0, description="η_aomi")
    master_seed: int = Field(0, ge=0)
    mc_samples: int = Field(1000, ge=1)

    @field_validator("altitudes_m")
    @classmethod
    def check_altitudes(cls, value: list[float]):
        if any(a <= 0 for a in value):
            raise ValueError("altitudes must be positive")
        if len(set(value)) != len(value):
            raise ValueError("altitudes must be unique")
        return value

    @field_validator("power_grid_w")
    @classmethod
    def check_power_grid(cls, value: list[float]):
        if any(p <= 0 for p in value):
            raise ValueError("power grid must be strictly positive")
        if any(b <= a for a, b in zip(value, value[1:])):
            raise ValueError("power grid must be sorted strictly ascending")
        return value


class ComparisonSection(BaseModel):
    model_config = ConfigDict(frozen=True)

    baseline: str
    candidate: str


class Scenario(BaseModel):
    """Сценарий эксперимента: популяция, константы, развертка и схемы"""
    model_config = ConfigDict(frozen=True)

    name: str = "scenario"
    population: PopulationSection = PopulationSection()
    constants: ConstantsSection = ConstantsSection()
    image: ImageSource = ImageSource()
    sweep: SweepSection
    schemes: list[SchemeConfig] = Field(min_length=1)
    comparison: Optional[ComparisonSection] = None
    # scheme name -> user_id -> D_cls, с
    classify_delay_overrides: dict[str, dict[int, float]] = Field(default_factory=dict)

    @model_validator(mode="before")
    @classmethod
    def apply_scheme_defaults(cls, data: Any):
        if not isinstance(data, dict):
            return data
        constants = data.get("constants") or {}
        if isinstance(constants, ConstantsSection):
            constants = constants.model_dump()
        fields = ConstantsSection.model_fields
        defaults = {
            "symbol_duration": constants.get("symbol_duration_s", fields["symbol_duration_s"].default),
            "encode_delay": constants.get("encode_delay_s", fields["encode_delay_s"].default),
        }
        schemes = [
            {**defaults, **scheme} if isinstance(scheme, dict) else scheme
            for scheme in data.get("schemes") or []
        ]
        return {**data, "schemes": schemes}

    @model_validator(mode="after")
    def check_consistency(self):
        names = [s.name for s in self.schemes]
        if len(set(names)) != len(names):
            raise ValueError(f"scheme names must be unique, got {names}")
        for scheme in self.schemes:
            try:
                SchemeService.validate_scheme(self.image, scheme)
            except SchemeConfigError as e:
                raise ValueError(str(e)) from e
        if self.comparison is not None:
            for name in (self.comparison.baseline, self.comparison.candidate):
                if name not in names:
                    raise ValueError(f"comparison refers to unknown scheme '{name}'")
        for name, per_user in self.classify_delay_overrides.items():
            if name not in names:
                raise ValueError(f"classify_delay_overrides refers to unknown scheme '{name}'")
            for user_id, delay in per_user.items():
                if not 0 <= user_id < self.population.size:
                    raise ValueError(f"classify_delay_overrides: user {user_id} outside population")
                if delay < 0:
                    raise ValueError(f"classify_delay_overrides: negative delay for user {user_id}")
        return self

    def scheme(self, name: str) -> SchemeConfig:
        for scheme in self.schemes:
            if scheme.name == name:
                return scheme
        raise KeyError(name)

    def classify_delay(self, scheme: str, user_id: int) -> Optional[float]:
        return self.classify_delay_overrides.get(scheme, {}).get(user_id)

    def with_seed(self, master_seed: int) -> "Scenario":
        sweep = SweepSection(**{**self.sweep.model_dump(), "master_seed": master_seed})
        return self.model_copy(update={"sweep": sweep})
