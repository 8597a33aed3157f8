import math
import logging
import numpy as np
from scipy.special import i0e

from app.core.exceptions import ChannelDomainError
from app.core.rng import make_rng
from app.core.units import SPEED_OF_LIGHT, db_to_linear, dbm_to_watts, linear_to_db, as_scalar
from app.schemas.channel import LinkGeometry, RainModel, RicianFading, UserChannel, LinkBudget

logger = logging.getLogger(__name__)

# Фаза LOS-компоненты фиксирована: важна только |h_i|²
H_LOS = 1.0 + 0.0j


class ChannelService:
    """
    Бюджет линии LEO -> наземный пользователь: наклонная дальность, потери в свободном
    пространстве, затухание в дожде, крупномасштабный коэффициент и райсовское замирание.
    Не хранит состояния, все методы статические.
    """

    @staticmethod
    def slant_range(geom: LinkGeometry) -> float:
        ratio = 1.0 + geom.orbital_altitude / geom.earth_radius
        eps = geom.elevation_angle
        radicand = ratio ** 2 - math.cos(eps) ** 2
        if radicand < 0:
            raise ChannelDomainError(f"Negative slant-range radicand {radicand} for elevation {geom.elevation_deg} deg")
        # При ε0 = 90° формула вырождается в o; возвращаем его точно
        if geom.elevation_deg == 90.0:
            return float(geom.orbital_altitude)
        return geom.earth_radius * (math.sqrt(radicand) - math.sin(eps))

    @staticmethod
    def free_space_path_loss_db(geom: LinkGeometry) -> float:
        distance = ChannelService.slant_range(geom)
        return 20.0 * math.log10(4.0 * math.pi * distance * geom.carrier_frequency / SPEED_OF_LIGHT)

    @staticmethod
    def rain_attenuation_db(rain: RainModel, elevation: float) -> float:
        """Затухание в дожде κ·R^β·L_rain, dB. elevation в радианах."""
        if not 0 < elevation <= math.pi / 2 + 1e-12:
            raise ChannelDomainError(f"Elevation {elevation} rad outside (0, pi/2]")
        if rain.rain_rate == 0:
            return 0.0
        inverse_length = (
            rain.path_coefficient * rain.rain_rate ** rain.path_exponent
            + (rain.elevation_coefficient - rain.elevation_offset) * math.sin(elevation)
        )
        path_length = 1.0 / inverse_length
        return rain.kappa * rain.rain_rate ** rain.beta * path_length

    @staticmethod
    def path_loss_total_db(user: UserChannel) -> float:
        # Сумма в dB: FSPL переводится в dB, дождь уже в dB
        return (
            ChannelService.free_space_path_loss_db(user.geometry)
            + ChannelService.rain_attenuation_db(user.rain, user.geometry.elevation_angle)
        )

    @staticmethod
    def large_scale_gain(user: UserChannel) -> float:
        gain_db = user.budget.satellite_gain_dbi + user.budget.user_gain_dbi - ChannelService.path_loss_total_db(user)
        return float(db_to_linear(gain_db))

    @staticmethod
    def sample_fading_power(fading: RicianFading, count: int) -> np.ndarray:
        """
        i.i.d. выборка |h_i|² = |√(K/(K+1))·h_LOS + √(1/(K+1))·h_NLOS|², h_NLOS ~ CN(0, 1).
        Одинаковый rng_seed дает побитово одинаковую выборку.
        """
        if count < 1:
            raise ValueError("count must be >= 1")
        k = fading.k_factor
        rng = make_rng(fading.rng_seed)
        real = rng.standard_normal(count)
        imag = rng.standard_normal(count)
        h_nlos = (real + 1j * imag) / math.sqrt(2.0)
        h = math.sqrt(k / (k + 1.0)) * H_LOS + math.sqrt(1.0 / (k + 1.0)) * h_nlos
        return np.abs(h) ** 2

    @staticmethod
    def fading_power_pdf(z, k_factor: float):
        """Плотность |h_i|² (нецентральный χ² с двумя степенями свободы)"""
        z = np.asarray(z, dtype=float)
        k = float(k_factor)
        zc = np.clip(z, 0.0, None)
        arg = 2.0 * np.sqrt(k * (k + 1.0) * zc)
        # I0(x) = i0e(x)·e^x, экспоненты сводятся в одну
        density = (k + 1.0) * np.exp(-k - (k + 1.0) * zc + arg) * i0e(arg)
        return as_scalar(np.where(z < 0, 0.0, density))

    @staticmethod
    def snr_linear(user: UserChannel, fading_gain):
        """γ_u = P_T·G_large·|h|²/σ², все величины в линейных единицах СИ"""
        gain = np.asarray(fading_gain, dtype=float)
        if np.any(gain < 0):
            raise ValueError("fading_gain must be non-negative")
        noise_w = float(dbm_to_watts(user.budget.noise_power_dbm))
        snr = user.budget.transmit_power_w * ChannelService.large_scale_gain(user) * gain / noise_w
        return as_scalar(snr)

    @staticmethod
    def mean_snr_db(user: UserChannel) -> float:
        return float(linear_to_db(ChannelService.snr_linear(user, 1.0)))

    @staticmethod
    def sample_snr_db(user: UserChannel, count: int) -> np.ndarray:
        gains = ChannelService.sample_fading_power(user.fading, count)
        return linear_to_db(ChannelService.snr_linear(user, gains))

    @staticmethod
    def link_budget(user: UserChannel) -> LinkBudget:
        fspl = ChannelService.free_space_path_loss_db(user.geometry)
        rain = ChannelService.rain_attenuation_db(user.rain, user.geometry.elevation_angle)
        total = fspl + rain
        budget = LinkBudget(
            user_id=user.user_id,
            slant_range_m=ChannelService.slant_range(user.geometry),
            free_space_loss_db=fspl,
            rain_attenuation_db=rain,
            total_path_loss_db=total,
            large_scale_gain_db=user.budget.satellite_gain_dbi + user.budget.user_gain_dbi - total,
            mean_snr_db=ChannelService.mean_snr_db(user),
        )
        logger.debug(f"Link budget user {user.user_id}: {budget.model_dump()}")
        return budget
