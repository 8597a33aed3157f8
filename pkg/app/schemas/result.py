from pydantic import BaseModel

from app.schemas.shs import ShsParameters, ShsSolution


class AaomiResponse(BaseModel):
    """Оба пути вычисления AAoMI: линейная система SHS и замкнутая формула"""
    params: ShsParameters
    stationary: tuple[float, float]
    solution: ShsSolution
    closed_form_aaomi: float
    relative_difference: float
