from concurrent.futures import ThreadPoolExecutor
import multiprocessing
from app.core.config import settings

# Ячейки развертки и прогоны симулятора - numpy-векторизованные задачи,
# большая часть времени проходит вне GIL.
count = multiprocessing.cpu_count()
MAX_WORKERS = settings.MAX_WORKERS or max(4, count + 2)

# Глобальный инстанс, общий для CLI и API
global_executor = ThreadPoolExecutor(
    max_workers=MAX_WORKERS,
    thread_name_prefix="sweep_worker"
)

def get_executor():
    return global_executor

def shutdown_executor():
    """Корректное завершение работы пула"""
    global_executor.shutdown(wait=True)
