"""Lagrange-Good Lab - exact power series and multivariate Lagrange inversion"""
__version__ = "1.0.0"
