"""Report and request models shared by the CLI and the HTTP API"""
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, Field

from ..core.config import settings


class OutputFormat(str, Enum):
    TEXT = "text"
    JSON = "json"
    CSV = "csv"


class Command(str, Enum):
    SOLVE = "solve"
    COEFF = "coeff"
    VERIFY = "verify"
    NUMERIC_CHECK = "numeric-check"
    DEMO = "demo"


# Report (stable JSON keys; absent sections are omitted)

class TermOut(BaseModel):
    k: List[int]
    c: str = Field(..., description="Reduced rational p/q")
    i: Optional[int] = Field(default=None, description="Component index of g (solve only)")

    class Config:
        extra = "forbid"


class MismatchOut(BaseModel):
    k: List[int]
    lhs: str
    rhs: str

    class Config:
        extra = "forbid"


class RowOut(BaseModel):
    k: List[int]
    lhs: str
    rhs: str
    expected: Optional[str] = None
    g: Optional[str] = None
    g_expected: Optional[str] = None

    class Config:
        extra = "forbid"


class NumericRowOut(BaseModel):
    order: int
    series_value: float
    oracle_value: float
    abs_error: float

    class Config:
        extra = "forbid"


class ReportOut(BaseModel):
    n: int
    order: int
    command: Command
    name: Optional[str] = None
    checked: Optional[int] = None
    mismatches: Optional[List[MismatchOut]] = None
    series: Optional[List[TermOut]] = None
    rows: Optional[List[RowOut]] = None
    numeric: Optional[List[NumericRowOut]] = None

    class Config:
        extra = "forbid"
        use_enum_values = True


class ErrorOut(BaseModel):
    error: str
    message: str
    exit_code: int


# HTTP requests

class SystemRequest(BaseModel):
    n: int = Field(..., ge=1, le=settings.max_variables, description="Number of variables")
    order: int = Field(..., ge=0, le=settings.max_order, description="Truncation order N")
    phi: str = Field(default="1", description="Expression for phi")
    f: List[str] = Field(..., min_length=1, description="Expressions f_1..f_n")
    variables: Optional[List[str]] = Field(default=None, description="Declared variable names")


class CoefficientRequest(SystemRequest):
    k: List[int] = Field(..., description="Multi-index")


class NumericCheckRequest(SystemRequest):
    x: Optional[List[float]] = Field(default=None, description="Evaluation point (default: inside the contraction ball)")
    orders: Optional[List[int]] = Field(default=None, description="Partial-sum orders")
    tol: Optional[float] = Field(default=None, gt=0)
    radius: Optional[float] = Field(default=None, gt=0, description="Radius of convergence for the rate check")
    max_error: Optional[float] = Field(default=None, gt=0, description="Bound on the last partial-sum error")


class DemoInfo(BaseModel):
    name: str
    description: str
    n: int
    default_order: int


class DemoListResponse(BaseModel):
    demos: List[DemoInfo]
    total: int
