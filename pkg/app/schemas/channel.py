from pydantic import BaseModel, ConfigDict, Field
import math

from app.core.units import EARTH_RADIUS_M


class LinkGeometry(BaseModel):
    """Геометрия линии спутник -> пользователь. Углы задаются в градусах."""
    model_config = ConfigDict(frozen=True)

    elevation_deg: float = Field(gt=0, le=90, description="Угол места ε0, градусы")
    orbital_altitude: float = Field(gt=0, description="Высота орбиты o, м")
    earth_radius: float = Field(EARTH_RADIUS_M, gt=0, description="Радиус Земли R_E, м")
    carrier_frequency: float = Field(20e9, gt=0, description="Несущая f_c, Гц")

    @property
    def elevation_angle(self) -> float:
        return math.radians(self.elevation_deg)


class RainModel(BaseModel):
    model_config = ConfigDict(frozen=True)

    rain_rate: float = Field(ge=0, description="Интенсивность дождя R, мм/ч")
    kappa: float = Field(0.075, gt=0)
    beta: float = Field(1.099, gt=0)
    # Коэффициенты эффективной длины трассы, как напечатаны
    path_coefficient: float = 0.00741
    path_exponent: float = 0.776
    elevation_coefficient: float = 0.232
    elevation_offset: float = 0.00018


class AntennaBudget(BaseModel):
    model_config = ConfigDict(frozen=True)

    satellite_gain_dbi: float = Field(description="G_T, dBi")
    user_gain_dbi: float = Field(description="G_R, dBi")
    noise_power_dbm: float = Field(-99.61, description="σ_u², dBm")
    transmit_power_w: float = Field(gt=0, description="P_T, Вт")


class RicianFading(BaseModel):
    model_config = ConfigDict(frozen=True)

    k_factor: float = Field(ge=0, description="K, линейный")
    rng_seed: int = Field(ge=0)


class UserChannel(BaseModel):
    model_config = ConfigDict(frozen=True)

    user_id: int = Field(ge=0)
    geometry: LinkGeometry
    rain: RainModel
    budget: AntennaBudget
    fading: RicianFading

    def with_power(self, transmit_power_w: float) -> "UserChannel":
        budget = AntennaBudget(**{**self.budget.model_dump(), "transmit_power_w": transmit_power_w})
        return self.model_copy(update={"budget": budget})

    def with_altitude(self, orbital_altitude: float) -> "UserChannel":
        geometry = LinkGeometry(**{**self.geometry.model_dump(), "orbital_altitude": orbital_altitude})
        return self.model_copy(update={"geometry": geometry})


class LinkBudget(BaseModel):
    """Сводка бюджета линии для логов и API"""
    user_id: int
    slant_range_m: float
    free_space_loss_db: float
    rain_attenuation_db: float
    total_path_loss_db: float
    large_scale_gain_db: float
    mean_snr_db: float
