from pathlib import Path
from typing import Any, Dict, List, Optional
import asyncio
import logging
import shutil

from app.core.config import settings
from app.core.task_manager import task_manager, Task, TaskStatus
from app.schemas.scenario import Scenario
from app.service.experiment_service import ExperimentService
from app.service.IO.result_service import ResultService

logger = logging.getLogger(__name__)


class TaskService:
    """Фоновые задачи развертки и проверки для HTTP-интерфейса"""

    @staticmethod
    def tasks_dir() -> Path:
        return Path(settings.OUTPUT_DIR) / "tasks"

    @staticmethod
    def output_dir(task_id: str) -> Path:
        return TaskService.tasks_dir() / task_id

    @staticmethod
    def cleanup_task_outputs() -> int:
        """
        Удаляет результаты задач прошлых запусков.
        После перезапуска task_manager пустой, старые файлы все равно недоступны.
        """
        tasks_dir = TaskService.tasks_dir()
        if not tasks_dir.exists():
            return 0
        deleted = 0
        for entry in tasks_dir.iterdir():
            try:
                if entry.is_dir():
                    shutil.rmtree(entry)
                else:
                    entry.unlink()
                deleted += 1
            except Exception as e:
                logger.warning(f"Could not delete leftover task output {entry}: {e}")
        if deleted:
            logger.info(f"Startup cleanup: removed {deleted} leftover task output(s)")
        return deleted

    @staticmethod
    def _sweep_sync(scenario: Scenario, out_dir: Path) -> Dict[str, Any]:
        result = ExperimentService.run_sweep(scenario)
        gains = None
        if scenario.comparison is not None:
            gains = ExperimentService.compare_schemes(
                result, scenario.comparison.baseline, scenario.comparison.candidate
            )
        written = ResultService.emit_results(result, out_dir, gains)
        return {
            "rows": len(result.rows),
            "master_seed": result.master_seed,
            "files": sorted(written),
        }

    @staticmethod
    def _validate_sync(scenario: Scenario, tolerance: float, horizon: Optional[float], out_dir: Path) -> Dict[str, Any]:
        report = ExperimentService.validate_mode(scenario, tolerance, horizon)
        path = ResultService.emit_validation(report, out_dir)
        return {
            "passed": report.passed,
            "max_relative_deviation": report.max_relative_deviation,
            "tolerance": report.tolerance,
            "horizon": report.horizon,
            "cases": len(report.entries),
            "files": [path.name],
        }

    @staticmethod
    async def _run(task_id: str, message: str, func, *args):
        try:
            task_manager.update_task(task_id, TaskStatus.PROCESSING, message)
            loop = asyncio.get_running_loop()
            # Ячейки считаются в общем пуле; сама задача ждет их в пуле цикла событий,
            # иначе параллельные задачи могут занять все рабочие потоки
            result = await loop.run_in_executor(None, func, *args)
            task_manager.update_task(task_id, TaskStatus.COMPLETED, message="Done", result=result)
            logger.info(f"Task {task_id} finished successfully")
        except Exception as e:
            logger.error(f"Task {task_id} failed: {e}")
            task_manager.update_task(task_id, TaskStatus.FAILED, error=str(e))

    @staticmethod
    async def run_sweep_task(task_id: str, scenario: Scenario):
        await TaskService._run(
            task_id, "Running sweep...", TaskService._sweep_sync, scenario, TaskService.output_dir(task_id)
        )

    @staticmethod
    async def run_validate_task(task_id: str, scenario: Scenario, tolerance: float, horizon: Optional[float]):
        await TaskService._run(
            task_id, "Running validation...", TaskService._validate_sync,
            scenario, tolerance, horizon, TaskService.output_dir(task_id),
        )

    @staticmethod
    def describe(task: Task) -> Dict[str, Any]:
        return {
            "task_id": task.task_id,
            "task_type": task.task_type,
            "status": task.status.value,
            "message": task.message,
            "result": task.result,
            "error": task.error,
            "created_at": task.created_at.timestamp(),
            "completed": task.completed,
        }

    @staticmethod
    def get_tasks_list(start: int = 0, limit: int = 10, status_filter: Optional[str] = None) -> tuple[List[Dict[str, Any]], int]:
        """Список задач с пагинацией, новые первыми"""
        tasks = [
            TaskService.describe(t) for t in task_manager.list_tasks()
            if not status_filter or t.status.value == status_filter
        ]
        return tasks[start:start + limit], len(tasks)
