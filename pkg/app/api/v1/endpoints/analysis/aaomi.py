from fastapi import APIRouter, HTTPException
from pydantic import ValidationError
import logging

from app.core.exceptions import CalculationError
from app.schemas.channel import LinkBudget, UserChannel
from app.schemas.result import AaomiResponse
from app.schemas.shs import ComplianceReport, ComplianceRequest, ShsParameters
from app.service.computation.aomi_service import AoMIService
from app.service.computation.channel_service import ChannelService

logger = logging.getLogger(__name__)
router = APIRouter()


@router.post("/aaomi", response_model=AaomiResponse)
async def calculate_aaomi(params: ShsParameters):
    """
    AAoMI одного пользователя двумя путями: решение 4x4 системы SHS и замкнутая формула.
    """
    try:
        solution = AoMIService.solve_correlation_system(params)
        closed = AoMIService.closed_form_aaomi(params)
        return AaomiResponse(
            params=params,
            stationary=AoMIService.stationary_probs(params),
            solution=solution,
            closed_form_aaomi=closed,
            relative_difference=abs(solution.aaomi - closed) / closed,
        )
    except CalculationError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"Error calculating AAoMI: {e}")
        raise HTTPException(status_code=500, detail="Internal server error")


@router.post("/compliance", response_model=ComplianceReport)
async def calculate_compliance(request: ComplianceRequest):
    try:
        return AoMIService.compliance_ratio(request.per_user_aaomi, request.threshold)
    except CalculationError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except Exception as e:
        logger.error(f"Error calculating compliance: {e}")
        raise HTTPException(status_code=500, detail="Internal server error")


@router.post("/link-budget", response_model=LinkBudget)
async def calculate_link_budget(user: UserChannel):
    try:
        return ChannelService.link_budget(user)
    except CalculationError as e:
        raise HTTPException(status_code=400, detail=str(e))
    except ValidationError as e:
        raise HTTPException(status_code=422, detail=str(e))
    except Exception as e:
        logger.error(f"Error calculating link budget: {e}")
        raise HTTPException(status_code=500, detail="Internal server error")
