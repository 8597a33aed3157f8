from fastapi import APIRouter, BackgroundTasks, HTTPException
from fastapi.responses import FileResponse
from pathlib import Path
from typing import Any, Optional
import logging

from app.core.config import settings
from app.core.exceptions import ConfigurationError, ResourceNotFoundError
from app.core.task_manager import task_manager, TaskStatus
from app.schemas.scenario import Scenario
from app.schemas.task import SweepRequest, TaskQueuedResponse, ValidateRequest
from app.service.IO.scenario_service import ScenarioService
from app.service.task_service import TaskService

logger = logging.getLogger(__name__)
router = APIRouter()


def _resolve_scenario(data: Optional[dict[str, Any]], seed: Optional[int]) -> Scenario:
    """Сценарий из тела запроса или файл SCENARIO_PATH; 404/422 до постановки задачи"""
    try:
        if data is None:
            return ScenarioService.load_scenario(settings.SCENARIO_PATH, seed)
        scenario = ScenarioService.parse_scenario(data, Path(settings.SCENARIO_PATH).parent)
        return scenario if seed is None else scenario.with_seed(seed)
    except ResourceNotFoundError as e:
        raise HTTPException(status_code=404, detail=str(e))
    except ConfigurationError as e:
        raise HTTPException(status_code=422, detail=str(e))


# 1. ЗАПУСК РАЗВЕРТКИ
@router.post("/sweep", response_model=TaskQueuedResponse)
async def start_sweep(request: SweepRequest, background_tasks: BackgroundTasks):
    scenario = _resolve_scenario(request.scenario, request.seed)
    task = task_manager.create_task("sweep")
    background_tasks.add_task(TaskService.run_sweep_task, task.task_id, scenario)
    logger.info(f"Queued sweep task {task.task_id} for scenario '{scenario.name}'")
    return TaskQueuedResponse(task_id=task.task_id)


# 2. ПРОВЕРКА ЗАМКНУТОЙ ФОРМУЛЫ СИМУЛЯЦИЕЙ
@router.post("/validate", response_model=TaskQueuedResponse)
async def start_validation(request: ValidateRequest, background_tasks: BackgroundTasks):
    scenario = _resolve_scenario(request.scenario, request.seed)
    tolerance = request.tolerance or settings.VALIDATION_TOLERANCE
    task = task_manager.create_task("validate")
    background_tasks.add_task(TaskService.run_validate_task, task.task_id, scenario, tolerance, request.horizon)
    logger.info(f"Queued validation task {task.task_id}, tolerance {tolerance}")
    return TaskQueuedResponse(task_id=task.task_id)


# 3. СКАЧИВАНИЕ CSV
@router.get("/{task_id}/files/{name}")
async def download_file(task_id: str, name: str):
    task = task_manager.get_task(task_id)
    if not task:
        raise HTTPException(status_code=404, detail="Task not found")
    if task.status != TaskStatus.COMPLETED:
        raise HTTPException(status_code=400, detail="Task not ready or failed")
    if name not in (task.result or {}).get("files", []):
        raise HTTPException(status_code=404, detail=f"File '{name}' not produced by task")

    path = TaskService.output_dir(task_id) / name
    if not path.is_file():
        raise HTTPException(status_code=404, detail="Result file missing on server")
    return FileResponse(path=path, filename=name, media_type="text/csv")
