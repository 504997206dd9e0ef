"""Utilities"""
from .expression_parser import parse_expression, parse_series

__all__ = ["parse_expression", "parse_series"]
