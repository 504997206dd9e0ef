"""Demo catalogue endpoints"""
import logging
from typing import Optional

from fastapi import APIRouter, HTTPException, Query, Request
from fastapi.concurrency import run_in_threadpool
from slowapi import Limiter
from slowapi.util import get_remote_address

from ..core.config import settings
from ..core.errors import LagrangeGoodError
from ..schemas.report import DemoInfo, DemoListResponse, ReportOut
from ..services.demo_service import demo_service
from ..services.inversion_service import inversion_service

logger = logging.getLogger(__name__)
router = APIRouter(prefix="/api/v1/demos", tags=["demos"])
limiter = Limiter(key_func=get_remote_address)


@router.get("", response_model=DemoListResponse)
async def list_demos() -> DemoListResponse:
    """Built-in instances"""
    demos = [
        DemoInfo(name=d.name, description=d.description, n=d.n, default_order=d.default_order)
        for d in demo_service.list_demos()
    ]
    return DemoListResponse(demos=demos, total=len(demos))


@router.get("/{name}", response_model=ReportOut, response_model_exclude_none=True)
@limiter.limit(settings.rate_limit_verify)
async def run_demo(
    request: Request,
    name: str,
    order: Optional[int] = Query(default=None, ge=0, le=settings.max_order, description="Truncation order"),
) -> ReportOut:
    """Run a demo and return the fixture comparison"""
    try:
        result = await run_in_threadpool(inversion_service.demo, name, order)
        return result.report
    except LagrangeGoodError as e:
        logger.warning(f"Demo rejected: {e}")
        status = 404 if name not in {d.name for d in demo_service.list_demos()} else e.http_status
        raise HTTPException(status_code=status, detail={"error": type(e).__name__, "message": str(e)})
