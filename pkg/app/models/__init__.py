"""Exact series arithmetic, the inversion engine and the numeric oracle"""
# Import from submodules directly:
# from app.models.series import Series
# from app.models.inversion import inversion_engine
