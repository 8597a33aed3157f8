from fastapi import APIRouter
from app.api.v1.endpoints.analysis import aaomi
router = APIRouter()

router.include_router(aaomi.router, tags=["analysis"])
