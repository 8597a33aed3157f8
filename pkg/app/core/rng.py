"""
Именованные генераторы случайных чисел.

Все потоки выводятся из master_seed через numpy SeedSequence со spawn_key,
поэтому подпоток пользователя зависит только от (master_seed, stream, user_id)
и не зависит от порядка выполнения.
"""
from typing import Iterable
import numpy as np

# Идентификаторы потоков
POPULATION_STREAM = 1
FADING_STREAM = 2
SIMULATION_STREAM = 3


def derive_seed(master_seed: int, *keys: int) -> int:
    sequence = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(k) for k in keys))
    return int(sequence.generate_state(1, dtype=np.uint64)[0])


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(int(seed))


def float_keys(values: Iterable[float]) -> tuple[int, ...]:
    """Битовое представление float64 как целочисленные ключи подпотока"""
    return tuple(int(np.float64(v).view(np.uint64)) for v in values)
