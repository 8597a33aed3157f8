from fastapi import APIRouter
from app.api.v1.endpoints.experiments import sweep
router = APIRouter()

router.include_router(sweep.router, tags=["experiments"])
