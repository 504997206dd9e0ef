"""API Endpoints"""
from .demos import router as demos_router
from .inversion import router as inversion_router
from .oracle import router as oracle_router

__all__ = ["demos_router", "inversion_router", "oracle_router"]
