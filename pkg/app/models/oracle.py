"""Floating-point oracle for the Lagrange-Good left-hand side

For x in a small ball the map u -> diag(x) f(u) is a contraction; its fixed
point g(x) is found by Picard iteration and
I(x) = phi(g(x)) / det(I - diag(x) J_f(g(x))) is evaluated directly. The
partial sums of the exact left-hand series must converge to I(x).
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from ..core.config import settings
from ..core.errors import ConfigError, EpsilonExhausted, NearSingular, NonConvergence, VariableCountMismatch
from .inversion import SeriesSystem, inversion_engine
from .series import Series, evaluate, partial_derivative

logger = logging.getLogger(__name__)


class PolyFunction:
    """Exact polynomial with float evaluation of its value and gradient"""

    def __init__(self, series: Series):
        self.series = series
        self.n = series.n
        self._exps, self._coefs = self._arrays(series)
        if series.order >= 1:
            self._gradient = [self._arrays(partial_derivative(series, j + 1)) for j in range(self.n)]
        else:
            empty = (np.zeros((0, self.n)), np.zeros(0))
            self._gradient = [empty for _ in range(self.n)]

    @staticmethod
    def _arrays(series: Series) -> Tuple[np.ndarray, np.ndarray]:
        items = series.items()
        exps = np.array([k for k, _ in items], dtype=float).reshape(len(items), series.n)
        coefs = np.array([float(c) for _, c in items], dtype=float)
        return exps, coefs

    @staticmethod
    def _eval(exps: np.ndarray, coefs: np.ndarray, u: np.ndarray) -> float:
        if not len(coefs):
            return 0.0
        return float(coefs @ np.prod(np.power(u, exps), axis=1))

    def __call__(self, u: Sequence[float]) -> float:
        return self._eval(self._exps, self._coefs, np.asarray(u, dtype=float))

    def gradient(self, u: Sequence[float]) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        return np.array([self._eval(exps, coefs, u) for exps, coefs in self._gradient])


@dataclass(frozen=True)
class ContractionResult:
    x: Tuple[float, ...]
    g_at_x: Tuple[float, ...]
    iterations: int
    lipschitz_estimate: float
    converged: bool
    residual: float


@dataclass(frozen=True)
class PartialSumRow:
    order: int
    series_value: float
    oracle_value: float
    abs_error: float


@dataclass(frozen=True)
class PartialSumTable:
    x: Tuple[float, ...]
    rows: List[PartialSumRow] = field(default_factory=list)

    @property
    def final_error(self) -> float:
        return self.rows[-1].abs_error if self.rows else 0.0

    def is_monotone(self, slack: Optional[float] = None) -> bool:
        slack = settings.monotone_slack if slack is None else slack
        errors = [row.abs_error for row in self.rows]
        return all(later <= earlier + slack for earlier, later in zip(errors, errors[1:]))

    def fitted_slope(self) -> Optional[float]:
        """Least-squares slope of log(abs_error) against N; None if under two usable rows"""
        usable = [(row.order, row.abs_error) for row in self.rows if row.abs_error > 0]
        if len(usable) < 2:
            return None
        orders = np.array([o for o, _ in usable], dtype=float)
        logs = np.log(np.array([e for _, e in usable]))
        return float(np.polyfit(orders, logs, 1)[0])

    def within_rate(self, radius: float = 1.0, slack: Optional[float] = None) -> bool:
        """Slope check against log(|x|_inf / radius) + slack"""
        slack = settings.slope_slack if slack is None else slack
        slope = self.fitted_slope()
        if slope is None:
            return True
        norm = max(abs(v) for v in self.x)
        return slope <= math.log(norm / radius) + slack


class AnalyticOracle:
    """
    Oracle numérique par application contractante.
    Les seuils par défaut viennent de la configuration.
    """

    def __init__(
        self,
        tol: Optional[float] = None,
        max_iter: Optional[int] = None,
        lipschitz_threshold: Optional[float] = None,
        singular_threshold: Optional[float] = None,
    ):
        self.tol = settings.oracle_tol if tol is None else tol
        self.max_iter = settings.oracle_max_iter if max_iter is None else max_iter
        self.lipschitz_threshold = (
            settings.lipschitz_threshold if lipschitz_threshold is None else lipschitz_threshold
        )
        self.singular_threshold = (
            settings.singular_det_threshold if singular_threshold is None else singular_threshold
        )

    @staticmethod
    def poly_functions(system: SeriesSystem) -> Tuple[List[PolyFunction], PolyFunction]:
        return [PolyFunction(fi) for fi in system.f], PolyFunction(system.phi)

    def numeric_fixed_point(
        self,
        f: Sequence[PolyFunction],
        x: Sequence[float],
        tol: Optional[float] = None,
        max_iter: Optional[int] = None,
    ) -> ContractionResult:
        """Picard iteration u <- diag(x) f(u) from u = 0"""
        tol = self.tol if tol is None else tol
        max_iter = self.max_iter if max_iter is None else max_iter
        if tol <= 0:
            raise ConfigError(f"tol must be positive, got {tol}")
        if max_iter < 1:
            raise ConfigError(f"max_iter must be >= 1, got {max_iter}")
        x_arr = np.asarray(x, dtype=float)
        if len(x_arr) != len(f):
            raise VariableCountMismatch(f"point has {len(x_arr)} coordinates, expected {len(f)}")

        def step(u: np.ndarray) -> np.ndarray:
            return x_arr * np.array([fi(u) for fi in f])

        u = np.zeros(len(f))
        image = step(u)
        prev_delta: Optional[float] = None
        lipschitz = 0.0
        residual = math.inf
        converged = False
        iterations = 0
        with np.errstate(over="ignore", invalid="ignore"):
            for t in range(1, max_iter + 1):
                u_next = image
                image = step(u_next)
                iterations = t
                delta = float(np.max(np.abs(u_next - u)))
                if prev_delta is not None and prev_delta > tol and math.isfinite(delta):
                    lipschitz = max(lipschitz, delta / prev_delta)
                prev_delta = delta
                u = u_next
                residual = float(np.max(np.abs(u - image)))
                if not math.isfinite(residual):
                    break
                if residual <= tol:
                    converged = True
                    break

        if not converged:
            logger.warning(f"contraction did not converge at x={x_arr.tolist()} after {iterations} iterations")
        return ContractionResult(
            x=tuple(float(v) for v in x_arr),
            g_at_x=tuple(float(v) for v in u),
            iterations=iterations,
            lipschitz_estimate=lipschitz,
            converged=converged,
            residual=residual,
        )

    def _matrix(self, f: Sequence[PolyFunction], x: np.ndarray, g: np.ndarray) -> np.ndarray:
        jacobian = np.array([fi.gradient(g) for fi in f])
        return np.eye(len(f)) - x[:, None] * jacobian

    def _solved(self, f, x, tol, max_iter) -> Tuple[np.ndarray, np.ndarray]:
        result = self.numeric_fixed_point(f, x, tol, max_iter)
        if not result.converged:
            raise NonConvergence(
                f"no contraction at x={list(result.x)} (residual {result.residual:.3e} after "
                f"{result.iterations} iterations); shrink x"
            )
        return np.asarray(result.x), np.asarray(result.g_at_x)

    def numeric_determinant(
        self,
        f: Sequence[PolyFunction],
        x: Sequence[float],
        tol: Optional[float] = None,
        max_iter: Optional[int] = None,
    ) -> float:
        """det(delta_ij - x_i d_j f_i(g(x))) by LU with partial pivoting"""
        x_arr, g = self._solved(f, x, tol, max_iter)
        return float(np.linalg.det(self._matrix(f, x_arr, g)))

    def numeric_lhs(
        self,
        f: Sequence[PolyFunction],
        phi: PolyFunction,
        x: Sequence[float],
        tol: Optional[float] = None,
        max_iter: Optional[int] = None,
    ) -> float:
        """I(x) = phi(g(x)) / det(delta_ij - x_i d_j f_i(g(x)))"""
        x_arr, g = self._solved(f, x, tol, max_iter)
        det = float(np.linalg.det(self._matrix(f, x_arr, g)))
        if abs(det) < self.singular_threshold:
            raise NearSingular(f"determinant {det:.3e} at x={x_arr.tolist()} is numerically singular")
        return phi(g) / det

    def compare_partial_sums(
        self,
        system: SeriesSystem,
        x: Sequence[float],
        orders: Sequence[int],
        tol: Optional[float] = None,
    ) -> PartialSumTable:
        """Tabulate |lhs partial sum at order N - I(x)| for each N"""
        orders = list(orders)
        if not orders:
            raise ConfigError("at least one order is required")
        if any(b <= a for a, b in zip(orders, orders[1:])):
            raise ConfigError(f"orders must be strictly increasing, got {orders}")
        if orders[0] < 0 or orders[-1] > system.order:
            raise ConfigError(f"orders must lie in 0..{system.order}, got {orders}")

        f, phi = self.poly_functions(system)
        oracle_value = self.numeric_lhs(f, phi, x, tol)
        rows = []
        for order in orders:
            lhs = inversion_engine.lhs_series(system.truncate(order))
            series_value = evaluate(lhs, x)
            rows.append(PartialSumRow(order, series_value, oracle_value, abs(series_value - oracle_value)))
            logger.debug(f"partial sum N={order}: {series_value!r} vs {oracle_value!r}")
        return PartialSumTable(x=tuple(float(v) for v in x), rows=rows)

    @staticmethod
    def probe_points(n: int, radius: float) -> List[np.ndarray]:
        points = []
        for i in range(n):
            for sign in (1.0, -1.0):
                point = np.zeros(n)
                point[i] = sign * radius
                points.append(point)
        points.append(np.full(n, radius / math.sqrt(n)))
        return points

    def find_epsilon(
        self,
        f: Sequence[PolyFunction],
        start: float = 0.5,
        shrink: Optional[float] = None,
        max_shrinks: Optional[int] = None,
    ) -> float:
        """First radius start * shrink^t whose probes all contract with Lipschitz <= threshold"""
        shrink = settings.epsilon_shrink if shrink is None else shrink
        max_shrinks = settings.epsilon_max_shrinks if max_shrinks is None else max_shrinks
        if not 0 < shrink < 1:
            raise ConfigError(f"shrink must lie in (0, 1), got {shrink}")
        if start <= 0:
            raise ConfigError(f"start must be positive, got {start}")

        radius = start
        for _ in range(max_shrinks + 1):
            results = [self.numeric_fixed_point(f, p) for p in self.probe_points(len(f), radius)]
            if all(r.converged and r.lipschitz_estimate <= self.lipschitz_threshold for r in results):
                logger.info(f"contraction witnessed at radius {radius:g}")
                return radius
            radius *= shrink
        raise EpsilonExhausted(f"no contraction radius found after {max_shrinks} shrinks from {start}")


analytic_oracle = AnalyticOracle()
