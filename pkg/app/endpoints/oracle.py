"""Analytic oracle API endpoints"""
import logging

from fastapi import APIRouter, HTTPException, Request
from fastapi.concurrency import run_in_threadpool
from slowapi import Limiter
from slowapi.util import get_remote_address

from ..core.config import settings
from ..core.errors import LagrangeGoodError
from ..schemas.report import NumericCheckRequest, ReportOut
from ..services.inversion_service import inversion_service

logger = logging.getLogger(__name__)
router = APIRouter(prefix="/api/v1/oracle", tags=["oracle"])
limiter = Limiter(key_func=get_remote_address)


@router.post("/partial-sums", response_model=ReportOut, response_model_exclude_none=True)
@limiter.limit(settings.rate_limit_verify)
async def partial_sums(request: Request, payload: NumericCheckRequest) -> ReportOut:
    """Partial sums of the exact LHS against the contraction-mapping value I(x)"""
    def check():
        system = inversion_service.build_system(
            payload.n, payload.order, payload.phi, payload.f, payload.variables
        )
        return inversion_service.numeric_check(
            system, payload.x, payload.orders, payload.tol, payload.radius, payload.max_error
        )

    try:
        return (await run_in_threadpool(check)).report
    except LagrangeGoodError as e:
        logger.warning(f"Numeric check rejected: {e}")
        raise HTTPException(status_code=e.http_status, detail={"error": type(e).__name__, "message": str(e)})
