from pathlib import Path
from typing import Any, Optional, Union
import logging
import tomllib
from pydantic import ValidationError

from app.core.exceptions import ConfigurationError, ResourceNotFoundError
from app.schemas.scenario import Scenario
from app.service.computation.accuracy_service import AccuracyService

logger = logging.getLogger(__name__)


class ScenarioService:
    """Загрузка сценария эксперимента из TOML и CSV-профилей точности"""

    @staticmethod
    def _resolve_profiles(data: dict[str, Any], base_dir: Path) -> dict[str, Any]:
        """Подставляет таблицы из table_csv; путь считается от файла сценария"""
        schemes = []
        for scheme in data.get("schemes", []):
            profile = dict(scheme.get("accuracy_profile") or {})
            csv_name = profile.pop("table_csv", None)
            if csv_name is not None:
                loaded = AccuracyService.load_profile_csv(base_dir / csv_name)
                profile = loaded.model_dump()
            schemes.append({**scheme, "accuracy_profile": profile})
        return {**data, "schemes": schemes}

    @staticmethod
    def parse_scenario(data: dict[str, Any], base_dir: Union[str, Path] = ".") -> Scenario:
        try:
            return Scenario(**ScenarioService._resolve_profiles(data, Path(base_dir)))
        except ValidationError as e:
            raise ConfigurationError(f"Invalid scenario: {e}") from e

    @staticmethod
    def load_scenario(path: Union[str, Path], seed: Optional[int] = None) -> Scenario:
        path = Path(path)
        if not path.is_file():
            raise ResourceNotFoundError(f"Scenario file not found: {path}")
        try:
            with path.open("rb") as f:
                data = tomllib.load(f)
        except tomllib.TOMLDecodeError as e:
            raise ConfigurationError(f"Cannot parse scenario {path}: {e}") from e

        data.setdefault("name", path.stem)
        scenario = ScenarioService.parse_scenario(data, path.parent)
        if seed is not None:
            try:
                scenario = scenario.with_seed(seed)
            except ValidationError as e:
                raise ConfigurationError(f"Invalid seed {seed}: {e}") from e
        logger.info(
            f"Loaded scenario '{scenario.name}' from {path}: {len(scenario.schemes)} schemes, "
            f"{scenario.population.size} users, seed {scenario.sweep.master_seed}"
        )
        return scenario
