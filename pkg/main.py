from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware
from app.api.v1.api import router as api_router
from app.core.config import settings
from contextlib import asynccontextmanager
from app.core.executor import shutdown_executor
from app.service.task_service import TaskService
from pathlib import Path
import logging

logger = logging.getLogger(__name__)

@asynccontextmanager
async def lifespan(app: FastAPI):
    Path(settings.OUTPUT_DIR).mkdir(parents=True, exist_ok=True)
    TaskService.cleanup_task_outputs()
    logger.info(f"Default scenario: {settings.SCENARIO_PATH}, results in {settings.OUTPUT_DIR}")
    yield
    shutdown_executor()

app = FastAPI(title="LEO AoMI Simulator", lifespan=lifespan)

app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=False,
    allow_methods=["*"],
    allow_headers=["*"],
    expose_headers=["Content-Disposition"]  # для скачивания CSV
)

app.include_router(api_router, prefix="/api/v1")

@app.get("/")
async def root():
    return {"message": "LEO AoMI Simulator"}

import uvicorn
if __name__ == "__main__":
    uvicorn.run(app, host=settings.HOST, port=settings.PORT)
