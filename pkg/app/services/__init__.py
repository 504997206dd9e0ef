"""Services"""
from .demo_service import DemoService, demo_service
from .inversion_service import InversionService, inversion_service
from .report_service import ReportService, report_service

__all__ = [
    "DemoService",
    "demo_service",
    "InversionService",
    "inversion_service",
    "ReportService",
    "report_service",
]
