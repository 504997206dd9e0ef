"""Pydantic schemas"""
from .report import (
    Command,
    OutputFormat,
    ReportOut,
    TermOut,
    MismatchOut,
    RowOut,
    NumericRowOut,
    ErrorOut,
    SystemRequest,
    CoefficientRequest,
    NumericCheckRequest,
)

__all__ = [
    "Command",
    "OutputFormat",
    "ReportOut",
    "TermOut",
    "MismatchOut",
    "RowOut",
    "NumericRowOut",
    "ErrorOut",
    "SystemRequest",
    "CoefficientRequest",
    "NumericCheckRequest",
]
