from typing import Optional
import logging
import math
import numpy as np
from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import AppBaseException, SweepError
from app.core.executor import get_executor
from app.core.rng import FADING_STREAM, POPULATION_STREAM, derive_seed, float_keys, make_rng
from app.core.units import db_to_linear
from app.schemas.channel import AntennaBudget, LinkGeometry, RainModel, RicianFading, UserChannel
from app.schemas.scenario import Scenario
from app.schemas.scheme import SchemeConfig
from app.schemas.shs import ShsParameters
from app.schemas.sweep import (
    SchemeGain, SweepResult, SweepRow, UserOutcome, ValidationEntry, ValidationReport,
)
from app.service.computation.accuracy_service import AccuracyService
from app.service.computation.aomi_service import AoMIService
from app.service.computation.channel_service import ChannelService
from app.service.computation.scheme_service import SchemeService
from app.service.computation.shs_simulator import SimulationService

logger = logging.getLogger(__name__)

# Порядок розыгрыша фиксирован: от него зависят популяции при заданном master_seed
_DRAW_ORDER = ("elevation_deg", "rain_rate_mmh", "k_factor_db", "satellite_gain_dbi", "user_gain_dbi")


class ExperimentService:
    """
    Эксперимент целиком: выборка популяции, развертка по (altitude, scheme, power),
    сравнение схем и проверка замкнутой формулы симуляцией.
    """

    @staticmethod
    def sample_population(scenario: Scenario, altitude: float) -> list[UserChannel]:
        """
        U пользователей с равномерными независимыми параметрами. Выборка зависит только
        от master_seed, поэтому популяции разных высот парные (общие случайные числа).
        """
        population = scenario.population
        constants = scenario.constants
        seed = scenario.sweep.master_seed
        rng = make_rng(derive_seed(seed, POPULATION_STREAM))
        draws = {
            name: rng.uniform(*getattr(population, name), size=population.size)
            for name in _DRAW_ORDER
        }
        k_linear = db_to_linear(draws["k_factor_db"])

        users = []
        for uid in range(population.size):
            users.append(UserChannel(
                user_id=uid,
                geometry=LinkGeometry(
                    elevation_deg=float(draws["elevation_deg"][uid]),
                    orbital_altitude=altitude,
                    earth_radius=constants.earth_radius_m,
                    carrier_frequency=constants.carrier_frequency_hz,
                ),
                rain=RainModel(
                    rain_rate=float(draws["rain_rate_mmh"][uid]),
                    kappa=constants.rain_kappa,
                    beta=constants.rain_beta,
                    path_coefficient=constants.rain_path_coefficient,
                    path_exponent=constants.rain_path_exponent,
                    elevation_coefficient=constants.rain_elevation_coefficient,
                    elevation_offset=constants.rain_elevation_offset,
                ),
                budget=AntennaBudget(
                    satellite_gain_dbi=float(draws["satellite_gain_dbi"][uid]),
                    user_gain_dbi=float(draws["user_gain_dbi"][uid]),
                    noise_power_dbm=constants.noise_power_dbm,
                    transmit_power_w=scenario.sweep.power_grid_w[0],
                ),
                fading=RicianFading(
                    k_factor=float(k_linear[uid]),
                    rng_seed=derive_seed(seed, FADING_STREAM, uid),
                ),
            ))
        logger.debug(f"Sampled {len(users)} users at altitude {altitude} m (seed {seed})")
        return users

    @staticmethod
    def _evaluate_cell(
        scenario: Scenario,
        altitude: float,
        scheme: SchemeConfig,
        power: float,
        users: list[UserChannel],
        fading: dict[int, np.ndarray],
    ) -> SweepRow:
        arrival_rate = scenario.image.arrival_rate
        try:
            outcomes = []
            for user in users:
                accuracy = AccuracyService.expected_accuracy(
                    scheme.accuracy_profile,
                    user.with_power(power),
                    scenario.sweep.mc_samples,
                    scheme=scheme.name,
                    fading_gains=fading[user.user_id],
                )
                delay = SchemeService.total_delay(scheme, scenario.classify_delay(scheme.name, user.user_id))
                if accuracy.rho > 0:
                    aaomi = AoMIService.closed_form_aaomi(
                        ShsParameters(arrival_rate=arrival_rate, success_prob=accuracy.rho, total_delay=delay)
                    )
                else:
                    # ни одно изображение не классифицируется верно
                    logger.warning(f"User {user.user_id}, scheme {scheme.name}, {power} W: zero accuracy, AAoMI = inf")
                    aaomi = math.inf
                outcomes.append(UserOutcome(
                    user_id=user.user_id,
                    rho=accuracy.rho,
                    rho_std_error=accuracy.std_error,
                    total_delay=delay,
                    aaomi=aaomi,
                ))
            per_user = [o.aaomi for o in outcomes]
            report = AoMIService.compliance_ratio(per_user, scenario.sweep.threshold_s)
        except (AppBaseException, ValidationError, ValueError) as e:
            raise SweepError(f"Sweep cell altitude={altitude} scheme={scheme.name} power={power}: {e}") from e

        return SweepRow(
            altitude_m=altitude,
            scheme=scheme.name,
            power_w=power,
            mean_accuracy=float(np.mean([o.rho for o in outcomes])),
            network_aaomi_s=report.network_aaomi,
            compliance_ratio=report.compliance_ratio,
            users=outcomes,
        )

    @staticmethod
    def run_sweep(scenario: Scenario) -> SweepResult:
        """
        Строка на каждую тройку (altitude, scheme, power). Выборки замирания общие для
        всех высот, схем и мощностей; порядок строк задается сортировкой ключей.
        """
        sweep = scenario.sweep
        populations = {
            altitude: ExperimentService.sample_population(scenario, altitude)
            for altitude in sweep.altitudes_m
        }
        # замирание зависит только от (master_seed, user_id)
        fading = {
            user.user_id: ChannelService.sample_fading_power(user.fading, sweep.mc_samples)
            for user in populations[sweep.altitudes_m[0]]
        }
        cells = [
            (altitude, scheme, power)
            for altitude in sorted(sweep.altitudes_m)
            for scheme in sorted(scenario.schemes, key=lambda s: s.name)
            for power in sweep.power_grid_w
        ]
        rows = list(get_executor().map(
            lambda cell: ExperimentService._evaluate_cell(
                scenario, cell[0], cell[1], cell[2], populations[cell[0]], fading
            ),
            cells,
        ))
        rows.sort(key=lambda row: row.key)
        logger.info(f"Sweep '{scenario.name}' finished: {len(rows)} rows, seed {sweep.master_seed}")
        return SweepResult(
            scenario=scenario.name,
            master_seed=sweep.master_seed,
            threshold_s=sweep.threshold_s,
            rows=rows,
        )

    @staticmethod
    def compare_schemes(result: SweepResult, baseline: str, candidate: str) -> list[SchemeGain]:
        """Относительный выигрыш candidate над baseline в каждой точке (altitude, power)"""
        gains = []
        for row in result.rows:
            if row.scheme != baseline:
                continue
            other = result.row(row.altitude_m, candidate, row.power_w)
            if other is None:
                continue
            accuracy_gain = 100.0 * (other.mean_accuracy - row.mean_accuracy) / row.mean_accuracy \
                if row.mean_accuracy > 0 else math.nan
            if math.isfinite(row.network_aaomi_s):
                aaomi_reduction = 100.0 * (row.network_aaomi_s - other.network_aaomi_s) / row.network_aaomi_s
            else:
                aaomi_reduction = math.nan
            gains.append(SchemeGain(
                altitude_m=row.altitude_m,
                power_w=row.power_w,
                accuracy_gain_pct=accuracy_gain,
                aaomi_reduction_pct=aaomi_reduction,
                compliance_gain=other.compliance_ratio - row.compliance_ratio,
            ))
        return gains

    @staticmethod
    def _power_subsample(grid: list[float], count: int) -> list[float]:
        if count >= len(grid):
            return list(grid)
        idx = np.unique(np.linspace(0, len(grid) - 1, count).round().astype(int))
        return [grid[i] for i in idx]

    @staticmethod
    def validate_mode(
        scenario: Scenario,
        tolerance: float,
        horizon: Optional[float] = None,
        power_subsample: int = 3,
    ) -> ValidationReport:
        """
        Для каждого пользователя, схемы и подвыборки мощностей сравнивает симуляцию SHS
        с замкнутой формулой. Горизонт по умолчанию 10^6/λ_I.
        """
        if tolerance <= 0:
            raise ValueError("tolerance must be positive")
        arrival_rate = scenario.image.arrival_rate
        if horizon is None:
            horizon = settings.VALIDATION_HORIZON or 1e6 / arrival_rate

        powers = ExperimentService._power_subsample(scenario.sweep.power_grid_w, power_subsample)
        reduced = scenario.model_copy(
            update={"sweep": scenario.sweep.model_copy(update={"power_grid_w": powers})}
        )
        result = ExperimentService.run_sweep(reduced)

        cases = []
        for row in result.rows:
            for user in row.users:
                if user.rho <= 0:
                    continue
                params = ShsParameters(arrival_rate=arrival_rate, success_prob=user.rho, total_delay=user.total_delay)
                key = (*float_keys((row.altitude_m, row.power_w)), user.user_id, *row.scheme.encode())
                cases.append((row, user, params, key))

        sims = SimulationService.simulate_batch(
            [c[2] for c in cases], horizon, scenario.sweep.master_seed, keys=[c[3] for c in cases]
        ) if cases else []

        entries = []
        for (row, user, params, _), sim in zip(cases, sims):
            closed = AoMIService.closed_form_aaomi(params)
            entries.append(ValidationEntry(
                altitude_m=row.altitude_m,
                scheme=row.scheme,
                power_w=row.power_w,
                user_id=user.user_id,
                closed_form_s=closed,
                simulated_s=sim.time_avg_aomi,
                std_error_s=sim.std_error,
                relative_deviation=abs(sim.time_avg_aomi - closed) / closed,
            ))
        worst = max((e.relative_deviation for e in entries), default=0.0)
        passed = worst <= tolerance
        log = logger.info if passed else logger.warning
        log(f"Validation: {len(entries)} cases, max relative deviation {worst:.3e}, tolerance {tolerance}")
        return ValidationReport(
            tolerance=tolerance,
            horizon=horizon,
            entries=entries,
            max_relative_deviation=worst,
            passed=passed,
        )
