"""Core modules"""
from .config import settings
from .errors import LagrangeGoodError

__all__ = ["settings", "LagrangeGoodError"]
