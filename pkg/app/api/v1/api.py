from fastapi import APIRouter
from app.api.v1.endpoints.analysis import api as AnalysisApi
from app.api.v1.endpoints.experiments import api as ExperimentsApi
from app.api.v1.endpoints.tasks import task_management
router = APIRouter()

router.include_router(AnalysisApi.router, prefix='/analysis')
router.include_router(ExperimentsApi.router, prefix='/experiments')
router.include_router(task_management.router, prefix='/tasks', tags=['tasks'])
