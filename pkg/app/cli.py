"""
Командная строка: развертка, проверка замкнутой формулы симуляцией, трасса SHS, HTTP-сервер.

Коды выхода: 0 - успех, 1 - проверка не пройдена или ошибка вычислений, 2 - ошибка конфигурации.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import Optional, Sequence

import uvicorn
from pydantic import ValidationError

from app.core.config import settings
from app.core.exceptions import CalculationError, ConfigurationError, ResourceNotFoundError, ValidationFailedError
from app.schemas.shs import ShsParameters
from app.service.computation.aomi_service import AoMIService
from app.service.computation.shs_simulator import SimulationService
from app.service.experiment_service import ExperimentService
from app.service.IO.result_service import ResultService
from app.service.IO.scenario_service import ScenarioService

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2


def parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="leo-aomi", description="AoMI of AI-edge LEO downlinks")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser):
        p.add_argument('--scenario',
                       default=settings.SCENARIO_PATH,
                       help='Scenario TOML file.')
        p.add_argument('--seed',
                       type=int,
                       default=None,
                       help='Override sweep.master_seed.')
        p.add_argument('--out',
                       default=settings.OUTPUT_DIR,
                       help='Output directory for CSV files.')

    sweep = sub.add_parser('sweep', help='Transmit-power sweep over altitudes and schemes.')
    common(sweep)

    validate = sub.add_parser('validate', help='Check the closed form against SHS simulation.')
    common(validate)
    validate.add_argument('--tolerance',
                          type=float,
                          default=settings.VALIDATION_TOLERANCE,
                          help='Maximum relative deviation.')
    validate.add_argument('--horizon',
                          type=float,
                          default=settings.VALIDATION_HORIZON,
                          help='Simulated time in s (default 10^6 / arrival rate).')
    validate.add_argument('--powers',
                          type=int,
                          default=3,
                          help='Number of power grid points to check.')

    trace = sub.add_parser('trace', help='Dump one SHS sample path as CSV.')
    trace.add_argument('--arrival-rate', type=float, default=1.0, help='Images per second.')
    trace.add_argument('--success-prob', type=float, required=True, help='Probability of correct classification.')
    trace.add_argument('--total-delay', type=float, required=True, help='Total delay in s.')
    trace.add_argument('--horizon', type=float, default=100.0, help='Simulated time in s.')
    trace.add_argument('--seed', type=int, default=0, help='Random seed.')
    trace.add_argument('--out',
                       default=str(Path(settings.OUTPUT_DIR) / "trace.csv"),
                       help='Trace CSV path.')

    serve = sub.add_parser('serve', help='Start the HTTP API.')
    serve.add_argument('--host', default=settings.HOST)
    serve.add_argument('--port', type=int, default=settings.PORT)
    return parser


def run_sweep(args) -> int:
    scenario = ScenarioService.load_scenario(args.scenario, args.seed)
    result = ExperimentService.run_sweep(scenario)
    gains = None
    if scenario.comparison is not None:
        gains = ExperimentService.compare_schemes(result, scenario.comparison.baseline, scenario.comparison.candidate)
    ResultService.emit_results(result, args.out, gains)
    return EXIT_OK


def run_validate(args) -> int:
    if args.tolerance <= 0:
        raise ConfigurationError("--tolerance must be positive")
    if args.horizon is not None and args.horizon <= 0:
        raise ConfigurationError("--horizon must be positive")
    scenario = ScenarioService.load_scenario(args.scenario, args.seed)
    report = ExperimentService.validate_mode(scenario, args.tolerance, args.horizon, args.powers)
    ResultService.emit_validation(report, args.out)
    status = "PASS" if report.passed else "FAIL"
    logger.info(
        f"{status}: max relative deviation {report.max_relative_deviation:.4e} "
        f"over {len(report.entries)} cases (tolerance {report.tolerance})"
    )
    if not report.passed:
        raise ValidationFailedError(
            f"max relative deviation {report.max_relative_deviation:.4e} exceeds tolerance {report.tolerance}"
        )
    return EXIT_OK


def run_trace(args) -> int:
    params = ShsParameters(
        arrival_rate=args.arrival_rate,
        success_prob=args.success_prob,
        total_delay=args.total_delay,
    )
    events = SimulationService.trace(params, args.horizon, args.seed)
    ResultService.emit_trace(events, args.out)
    logger.info(
        f"Trace: {len(events) - 1} events, time average "
        f"{SimulationService.time_average_from_trace(events, args.horizon):.4f} s, "
        f"closed form {AoMIService.closed_form_aaomi(params):.4f} s"
    )
    return EXIT_OK


def run_serve(args) -> int:
    uvicorn.run("main:app", host=args.host, port=args.port)
    return EXIT_OK


COMMANDS = {
    "sweep": run_sweep,
    "validate": run_validate,
    "trace": run_trace,
    "serve": run_serve,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=getattr(logging, settings.LOG_LEVEL.upper(), logging.INFO),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    args = parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (ConfigurationError, ResourceNotFoundError, ValidationError) as e:
        logger.error(f"Configuration error: {e}")
        return EXIT_CONFIG
    except ValidationFailedError as e:
        logger.error(f"Validation failed: {e}")
        return EXIT_FAILED
    except CalculationError as e:
        logger.error(f"Calculation failed: {e}")
        return EXIT_FAILED


if __name__ == '__main__':
    sys.exit(main())
