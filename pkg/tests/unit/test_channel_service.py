import math
import pytest
import numpy as np
from unittest.mock import patch
from scipy import integrate, stats

from app.core.exceptions import ChannelDomainError
from app.core.units import db_to_linear, linear_to_db
from app.schemas.channel import LinkGeometry, RainModel, RicianFading, UserChannel, AntennaBudget
from app.service.computation.channel_service import ChannelService


# --- Наклонная дальность и потери в свободном пространстве ---

@pytest.mark.parametrize("altitude", [400e3, 1000e3])
def test_slant_range_zenith_equals_altitude(altitude):
    """При ε0 = 90° дальность равна высоте орбиты точно"""
    geom = LinkGeometry(elevation_deg=90.0, orbital_altitude=altitude)
    assert ChannelService.slant_range(geom) == altitude


def test_slant_range_low_elevation():
    geom = LinkGeometry(elevation_deg=20.0, orbital_altitude=400e3)
    assert ChannelService.slant_range(geom) == pytest.approx(984.04e3, rel=1e-3)


def test_slant_range_decreasing_in_elevation():
    ranges = [
        ChannelService.slant_range(LinkGeometry(elevation_deg=e, orbital_altitude=400e3))
        for e in np.linspace(1.0, 90.0, 90)
    ]
    assert all(b < a for a, b in zip(ranges, ranges[1:]))


@pytest.mark.parametrize("altitude, expected", [(400e3, 170.509), (1000e3, 178.468)])
def test_free_space_path_loss(altitude, expected):
    geom = LinkGeometry(elevation_deg=90.0, orbital_altitude=altitude)
    assert ChannelService.free_space_path_loss_db(geom) == pytest.approx(expected, abs=1e-3)


def test_free_space_path_loss_log_identity():
    """Удвоение дальности добавляет 20·log10(2) dB, умножение на 10 - ровно 20 dB"""
    near = ChannelService.free_space_path_loss_db(LinkGeometry(elevation_deg=90.0, orbital_altitude=400e3))
    far = ChannelService.free_space_path_loss_db(LinkGeometry(elevation_deg=90.0, orbital_altitude=800e3))
    ten = ChannelService.free_space_path_loss_db(LinkGeometry(elevation_deg=90.0, orbital_altitude=4000e3))
    assert far - near == pytest.approx(20.0 * math.log10(2.0), abs=1e-12)
    assert ten - near == pytest.approx(20.0, abs=1e-12)


# --- Дождь ---

def test_rain_attenuation_zero_rate():
    assert ChannelService.rain_attenuation_db(RainModel(rain_rate=0.0), math.radians(30.0)) == 0.0


def test_rain_attenuation_heavy_rain():
    value = ChannelService.rain_attenuation_db(RainModel(rain_rate=25.0), math.radians(30.0))
    assert value == pytest.approx(12.5186, abs=1e-3)


def test_rain_attenuation_monotone_in_rate():
    elevation = math.radians(60.0)
    light = ChannelService.rain_attenuation_db(RainModel(rain_rate=0.1), elevation)
    heavy = ChannelService.rain_attenuation_db(RainModel(rain_rate=25.0), elevation)
    assert 0.0 < light < heavy


@pytest.mark.parametrize("elevation", [0.0, -0.1, math.pi])
def test_rain_attenuation_bad_elevation(elevation):
    with pytest.raises(ChannelDomainError):
        ChannelService.rain_attenuation_db(RainModel(rain_rate=1.0), elevation)


def test_rain_overrides_change_result():
    """Коэффициенты эффективной длины трассы задаются из сценария"""
    base = ChannelService.rain_attenuation_db(RainModel(rain_rate=10.0), math.radians(45.0))
    other = ChannelService.rain_attenuation_db(
        RainModel(rain_rate=10.0, elevation_offset=0.05), math.radians(45.0)
    )
    assert other > base


# --- Крупномасштабный коэффициент ---

def _user(elevation=40.0, altitude=400e3, rain=12.0, power=1.0, k=10.0, seed=1):
    return UserChannel(
        user_id=0,
        geometry=LinkGeometry(elevation_deg=elevation, orbital_altitude=altitude),
        rain=RainModel(rain_rate=rain),
        budget=AntennaBudget(satellite_gain_dbi=30.0, user_gain_dbi=25.0, transmit_power_w=power),
        fading=RicianFading(k_factor=k, rng_seed=seed),
    )


def test_large_scale_gain_midpoint_parameters():
    """ε0 = 40°, 400 км, 12 мм/ч: FSPL ≈ 174.004 dB, дождь ≈ 5.756 dB"""
    user = _user()
    assert ChannelService.path_loss_total_db(user) == pytest.approx(179.760, abs=0.01)
    assert float(linear_to_db(ChannelService.large_scale_gain(user))) == pytest.approx(-124.760, abs=0.01)


def test_large_scale_gain_without_rain():
    user = _user(rain=0.0)
    fspl = ChannelService.free_space_path_loss_db(user.geometry)
    assert ChannelService.large_scale_gain(user) == pytest.approx(float(db_to_linear(55.0 - fspl)), rel=1e-12)


# --- SNR ---

def test_snr_dbm_bookkeeping():
    """P_T = 1 Вт, G_large = 10^(-11.5), σ² = -99.61 dBm -> 14.61 dB"""
    user = _user()
    with patch.object(ChannelService, "large_scale_gain", return_value=10 ** (-11.5)):
        snr = ChannelService.snr_linear(user, 1.0)
    assert float(linear_to_db(snr)) == pytest.approx(14.61, abs=1e-9)


def test_snr_linear_in_power_and_gain(user_channel):
    base = ChannelService.snr_linear(user_channel, 0.5)
    doubled = ChannelService.snr_linear(user_channel.with_power(2.0), 0.5)
    assert doubled == pytest.approx(2.0 * base, rel=1e-12)
    assert ChannelService.snr_linear(user_channel, 1.0) == pytest.approx(2.0 * base, rel=1e-12)
    assert ChannelService.snr_linear(user_channel, 0.0) == 0.0


def test_snr_rejects_negative_gain(user_channel):
    with pytest.raises(ValueError):
        ChannelService.snr_linear(user_channel, -0.1)


def test_link_budget_summary(user_channel):
    budget = ChannelService.link_budget(user_channel)
    assert budget.total_path_loss_db == pytest.approx(budget.free_space_loss_db + budget.rain_attenuation_db)
    assert budget.large_scale_gain_db == pytest.approx(55.0 - budget.total_path_loss_db)
    assert budget.mean_snr_db == pytest.approx(ChannelService.mean_snr_db(user_channel))


# --- Райсовское замирание ---

@pytest.mark.parametrize("k_db", [0.0, 5.0, 10.0, 15.0])
def test_fading_unit_mean(k_db):
    fading = RicianFading(k_factor=float(db_to_linear(k_db)), rng_seed=123)
    samples = ChannelService.sample_fading_power(fading, 1_000_000)
    assert np.all(samples >= 0)
    assert samples.mean() == pytest.approx(1.0, abs=0.01)


@pytest.mark.parametrize("k", [0.0, 1.0, 10.0, 31.6])
def test_fading_variance(k):
    samples = ChannelService.sample_fading_power(RicianFading(k_factor=k, rng_seed=5), 1_000_000)
    assert samples.var() == pytest.approx((2 * k + 1) / (k + 1) ** 2, rel=0.03)


def test_fading_matches_noncentral_chi_square():
    """2(K+1)|h|² ~ χ'²(2, 2K): расстояние Колмогорова-Смирнова мало"""
    k = 10.0
    samples = ChannelService.sample_fading_power(RicianFading(k_factor=k, rng_seed=99), 1_000_000)
    result = stats.kstest(2 * (k + 1) * samples, stats.ncx2(df=2, nc=2 * k).cdf)
    assert result.statistic < 0.01


def test_fading_pure_los_limit():
    samples = ChannelService.sample_fading_power(RicianFading(k_factor=1e9, rng_seed=3), 1000)
    np.testing.assert_allclose(samples, 1.0, atol=1e-3)


def test_fading_reproducible():
    fading = RicianFading(k_factor=3.0, rng_seed=42)
    first = ChannelService.sample_fading_power(fading, 500)
    second = ChannelService.sample_fading_power(fading, 500)
    assert np.array_equal(first, second)


@pytest.mark.parametrize("k", [0.0, 3.16, 10.0, 31.6])
def test_fading_pdf_normalised(k):
    total, _ = integrate.quad(lambda z: ChannelService.fading_power_pdf(z, k), 0.0, 20.0, limit=200, points=[1.0])
    assert total == pytest.approx(1.0, abs=1e-6)


def test_fading_pdf_rayleigh_and_scipy():
    """K = 0 - экспонента; в общем случае совпадает с масштабированным ncx2"""
    assert ChannelService.fading_power_pdf(1.0, 0.0) == pytest.approx(math.exp(-1.0), rel=1e-12)
    z = np.linspace(0.05, 3.0, 40)
    k = 10.0
    expected = 2 * (k + 1) * stats.ncx2.pdf(2 * (k + 1) * z, df=2, nc=2 * k)
    np.testing.assert_allclose(ChannelService.fading_power_pdf(z, k), expected, rtol=1e-6)
    assert ChannelService.fading_power_pdf(-1.0, k) == 0.0
