from fastapi import APIRouter, HTTPException, Query
from typing import Optional

from app.core.task_manager import task_manager
from app.schemas.task import TaskResponse, TasksListResponse, TaskStatus
from app.service.task_service import TaskService

router = APIRouter()


@router.get("/", response_model=TasksListResponse)
async def list_tasks(
    start: int = Query(0, ge=0, description="Начальная позиция"),
    limit: int = Query(10, gt=0, le=100, description="Количество задач"),
    status_filter: Optional[TaskStatus] = Query(None, description="Фильтр по статусу"),
):
    tasks, total = TaskService.get_tasks_list(start, limit, status_filter.value if status_filter else None)
    return TasksListResponse(tasks=tasks, total=total, start=start, limit=limit)


@router.get("/{task_id}", response_model=TaskResponse)
async def get_task_status(task_id: str):
    task = task_manager.get_task(task_id)
    if not task:
        raise HTTPException(status_code=404, detail="Task not found")
    return TaskService.describe(task)
