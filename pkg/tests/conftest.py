import pytest
import pytest_asyncio
from pathlib import Path
from httpx import AsyncClient, ASGITransport
from fastapi import FastAPI

from app.api.v1.api import router as api_router
from app.core.task_manager import task_manager
from app.schemas.accuracy import AccuracyProfile
from app.schemas.channel import AntennaBudget, LinkGeometry, RainModel, RicianFading, UserChannel
from app.schemas.scenario import Scenario
from app.schemas.scheme import SchemeConfig, SchemeKind
from app.service.IO.scenario_service import ScenarioService

ROOT = Path(__file__).resolve().parent.parent
DEFAULT_SCENARIO = ROOT / "scenarios" / "default.toml"
MEASURED_SCENARIO = ROOT / "scenarios" / "measured.toml"


@pytest.fixture
def user_channel():
    """Пользователь из примера бюджета линии: 400 км, 30°, дождь 10 мм/ч, K = 10"""
    return UserChannel(
        user_id=0,
        geometry=LinkGeometry(elevation_deg=30.0, orbital_altitude=400e3),
        rain=RainModel(rain_rate=10.0),
        budget=AntennaBudget(satellite_gain_dbi=30.0, user_gain_dbi=25.0, transmit_power_w=1.0),
        fading=RicianFading(k_factor=10.0, rng_seed=7),
    )


@pytest.fixture
def constant_profile():
    """Профиль без зависимости от SNR: ρ = 0.7"""
    return AccuracyProfile(floor=0.7, ceiling=0.7)


@pytest.fixture
def default_scenario() -> Scenario:
    return ScenarioService.load_scenario(DEFAULT_SCENARIO)


@pytest.fixture
def measured_scenario() -> Scenario:
    return ScenarioService.load_scenario(MEASURED_SCENARIO)


@pytest.fixture
def small_scenario_data():
    """Минимальный сценарий: 3 пользователя, одна схема с постоянной точностью"""
    return {
        "name": "small",
        "population": {"size": 3},
        "sweep": {
            "altitudes_m": [400e3, 1000e3],
            "power_grid_w": [0.1, 1.0, 10.0],
            "threshold_s": 2.0,
            "master_seed": 11,
            "mc_samples": 200,
        },
        "schemes": [
            {
                "name": "sscc",
                "kind": "sscc",
                "symbol_count": 1024,
                "classify_delay": 0.03,
                "accuracy_profile": {"floor": 0.7, "ceiling": 0.7},
            }
        ],
    }


@pytest.fixture
def small_scenario(small_scenario_data) -> Scenario:
    return Scenario(**small_scenario_data)


@pytest.fixture
def djscc_scheme():
    return SchemeConfig(
        name="djscc",
        kind=SchemeKind.DJSCC,
        downsampling_stages=2,
        feature_channels=16,
        symbol_count=1024,
        classify_delay=0.02,
        accuracy_profile=AccuracyProfile(floor=0.1, ceiling=0.85, midpoint_snr=-5.0, slope=0.3),
    )


@pytest.fixture(autouse=True)
def clear_tasks():
    """Реестр задач глобальный, очищаем между тестами"""
    task_manager.tasks.clear()
    yield
    task_manager.tasks.clear()


@pytest_asyncio.fixture(scope="function")
async def client(tmp_path, monkeypatch):
    """
    Тестовый клиент FastAPI. Результаты задач пишутся во временную папку.
    """
    monkeypatch.setattr("app.core.config.settings.OUTPUT_DIR", str(tmp_path))
    monkeypatch.setattr("app.core.config.settings.SCENARIO_PATH", str(DEFAULT_SCENARIO))

    app = FastAPI()
    app.include_router(api_router, prefix="/api/v1")

    async with AsyncClient(transport=ASGITransport(app=app), base_url="http://test/api/v1") as ac:
        yield ac
