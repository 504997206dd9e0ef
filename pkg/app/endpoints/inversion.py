"""Inversion API endpoints - solve, coefficient, verify"""
import logging

from fastapi import APIRouter, HTTPException, Request
from fastapi.concurrency import run_in_threadpool
from slowapi import Limiter
from slowapi.util import get_remote_address

from ..core.config import settings
from ..core.errors import LagrangeGoodError
from ..models.inversion import SeriesSystem
from ..schemas.report import CoefficientRequest, ReportOut, SystemRequest
from ..services.inversion_service import inversion_service

logger = logging.getLogger(__name__)
router = APIRouter(prefix="/api/v1/inversion", tags=["inversion"])
limiter = Limiter(key_func=get_remote_address)


def _system(payload: SystemRequest) -> SeriesSystem:
    return inversion_service.build_system(
        payload.n, payload.order, payload.phi, payload.f, payload.variables
    )


def _http_error(e: LagrangeGoodError) -> HTTPException:
    return HTTPException(status_code=e.http_status, detail={"error": type(e).__name__, "message": str(e)})


@router.post("/solve", response_model=ReportOut, response_model_exclude_none=True)
@limiter.limit(settings.rate_limit_default)
async def solve(request: Request, payload: SystemRequest) -> ReportOut:
    """Solve g_i = x_i f_i(g) to the requested order"""
    try:
        result = await run_in_threadpool(lambda: inversion_service.solve(_system(payload)))
        return result.report
    except LagrangeGoodError as e:
        logger.warning(f"Solve rejected: {e}")
        raise _http_error(e)


@router.post("/coefficient", response_model=ReportOut, response_model_exclude_none=True)
@limiter.limit(settings.rate_limit_default)
async def coefficient(request: Request, payload: CoefficientRequest) -> ReportOut:
    """Compare one coefficient of both sides of the identity"""
    try:
        result = await run_in_threadpool(lambda: inversion_service.coefficient(_system(payload), payload.k))
        return result.report
    except LagrangeGoodError as e:
        logger.warning(f"Coefficient rejected: {e}")
        raise _http_error(e)


@router.post("/verify", response_model=ReportOut, response_model_exclude_none=True)
@limiter.limit(settings.rate_limit_verify)
async def verify(request: Request, payload: SystemRequest) -> ReportOut:
    """
    Compare every coefficient of total degree <= N.

    Mismatches are part of the report, not an error status.
    """
    try:
        result = await run_in_threadpool(lambda: inversion_service.verify(_system(payload)))
        return result.report
    except LagrangeGoodError as e:
        logger.warning(f"Verify rejected: {e}")
        raise _http_error(e)
