"""
Единственное место для пересчетов dB/dBm <-> линейные единицы.
Внутренние вычисления ведутся в линейных единицах СИ, конфигурация и отчеты - в dB/dBm/W.
"""
import numpy as np

SPEED_OF_LIGHT = 2.998e8  # м/с
EARTH_RADIUS_M = 6371e3


def db_to_linear(value_db):
    return np.power(10.0, np.asarray(value_db, dtype=float) / 10.0)


def linear_to_db(value):
    # log10(0) -> -inf без предупреждения: нулевое замирание дает SNR = -inf dB
    with np.errstate(divide="ignore"):
        return 10.0 * np.log10(np.asarray(value, dtype=float))


def dbm_to_watts(value_dbm):
    return db_to_linear(np.asarray(value_dbm, dtype=float) - 30.0)


def watts_to_dbm(value_w):
    return linear_to_db(value_w) + 30.0


def as_scalar(value):
    """Возвращает float для 0-мерных массивов, иначе массив без изменений"""
    arr = np.asarray(value)
    return float(arr) if arr.ndim == 0 else arr
