from pydantic import BaseModel, Field
from typing import Optional, Any, List
from enum import Enum


class TaskStatus(str, Enum):
    QUEUED = "queued"
    PROCESSING = "processing"
    COMPLETED = "completed"
    FAILED = "failed"


class TaskResponse(BaseModel):
    task_id: str
    task_type: str
    status: TaskStatus
    message: str = ""
    result: Optional[Any] = None
    error: Optional[str] = None
    created_at: float
    completed: bool


class TasksListResponse(BaseModel):
    tasks: List[TaskResponse]
    total: int
    start: int
    limit: int


class TaskQueuedResponse(BaseModel):
    task_id: str
    status: TaskStatus = TaskStatus.QUEUED


class ValidateRequest(BaseModel):
    scenario: Optional[dict[str, Any]] = Field(None, description="Сценарий; по умолчанию SCENARIO_PATH")
    tolerance: Optional[float] = Field(None, gt=0)
    horizon: Optional[float] = Field(None, gt=0)
    seed: Optional[int] = Field(None, ge=0)


class SweepRequest(BaseModel):
    scenario: Optional[dict[str, Any]] = Field(None, description="Сценарий; по умолчанию SCENARIO_PATH")
    seed: Optional[int] = Field(None, ge=0)
