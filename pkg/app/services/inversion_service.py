"""Inversion workflows - business logic shared by the CLI and the HTTP API"""
import logging
import math
from dataclasses import dataclass
from typing import List, Optional, Sequence

from ..core.config import settings
from ..core.errors import EXIT_MISMATCH, EXIT_OK, ConfigError, VariableCountMismatch
from ..models.inversion import SeriesSystem, inversion_engine
from ..models.oracle import analytic_oracle
from ..models.series import Series, coefficient, format_rational
from ..schemas.report import Command, MismatchOut, NumericRowOut, ReportOut, RowOut, TermOut
from ..utils.expression_parser import parse_series
from .demo_service import demo_service

logger = logging.getLogger(__name__)


@dataclass
class WorkflowResult:
    report: ReportOut
    exit_code: int


def series_terms(series: Series, component: Optional[int] = None) -> List[TermOut]:
    return [TermOut(k=list(k), c=format_rational(c), i=component) for k, c in series.items()]


def default_orders(order: int) -> List[int]:
    evens = list(range(2, order + 1, 2))
    return evens or [order]


class InversionService:
    """
    Service layer for the Lagrange-Good workflows.
    Builds systems from expressions and turns engine results into reports.
    """

    def build_system(
        self,
        n: int,
        order: int,
        phi: str,
        f: Sequence[str],
        names: Optional[Sequence[str]] = None,
    ) -> SeriesSystem:
        if not 1 <= n <= settings.max_variables:
            raise ConfigError(f"n must lie in 1..{settings.max_variables}, got {n}")
        if not 0 <= order <= settings.max_order:
            raise ConfigError(f"order must lie in 0..{settings.max_order}, got {order}")
        if len(f) != n:
            raise ConfigError(f"expected {n} expressions for f, got {len(f)}")
        if names is not None and len(names) != n:
            raise ConfigError(f"expected {n} variable names, got {len(names)}")
        phi_series = parse_series(phi, n, order, names)
        f_series = tuple(parse_series(expr, n, order, names) for expr in f)
        return SeriesSystem(phi_series, f_series)

    def solve(self, system: SeriesSystem) -> WorkflowResult:
        solution = inversion_engine.solve_fixed_point(system)
        terms: List[TermOut] = []
        for i, gi in enumerate(solution.g, start=1):
            terms.extend(series_terms(gi, component=i))
        report = ReportOut(n=system.n, order=system.order, command=Command.SOLVE, series=terms)
        return WorkflowResult(report, EXIT_OK if solution.residual_ok else EXIT_MISMATCH)

    def coefficient(self, system: SeriesSystem, k: Sequence[int]) -> WorkflowResult:
        k = tuple(k)
        if len(k) != system.n:
            raise VariableCountMismatch(f"multi-index {list(k)} has length {len(k)}, expected {system.n}")
        lhs_value = coefficient(inversion_engine.lhs_series(system), k)
        rhs_value = inversion_engine.rhs_coefficient(system, k)
        mismatches = []
        if lhs_value != rhs_value:
            mismatches.append(MismatchOut(k=list(k), lhs=format_rational(lhs_value), rhs=format_rational(rhs_value)))
        report = ReportOut(
            n=system.n,
            order=system.order,
            command=Command.COEFF,
            checked=1,
            mismatches=mismatches,
            rows=[RowOut(k=list(k), lhs=format_rational(lhs_value), rhs=format_rational(rhs_value))],
        )
        return WorkflowResult(report, EXIT_MISMATCH if mismatches else EXIT_OK)

    def verify(self, system: SeriesSystem, sabotage: bool = False) -> WorkflowResult:
        result = inversion_engine.verify_identity(system, sabotage=sabotage)
        report = ReportOut(
            n=result.n,
            order=result.order,
            command=Command.VERIFY,
            checked=result.checked,
            mismatches=[
                MismatchOut(k=list(m.k), lhs=format_rational(m.lhs), rhs=format_rational(m.rhs))
                for m in result.mismatches
            ],
            series=series_terms(result.lhs_series),
            rows=[
                RowOut(k=list(k), lhs=format_rational(left), rhs=format_rational(right))
                for k, left, right in result.comparisons
            ],
        )
        return WorkflowResult(report, EXIT_OK if result.ok else EXIT_MISMATCH)

    def numeric_check(
        self,
        system: SeriesSystem,
        x: Optional[Sequence[float]] = None,
        orders: Optional[Sequence[int]] = None,
        tol: Optional[float] = None,
        radius: Optional[float] = None,
        max_error: Optional[float] = None,
    ) -> WorkflowResult:
        """
        Partial sums against the oracle value I(x).

        Passes when the errors are non-increasing, the fitted log-error slope
        stays under log(|x|_inf / radius) + slope_slack and, if a bound is set,
        the last error is at most max_error.
        """
        radius = settings.partial_sum_radius if radius is None else radius
        max_error = settings.partial_sum_max_error if max_error is None else max_error
        if x is None:
            f, _ = analytic_oracle.poly_functions(system)
            epsilon = analytic_oracle.find_epsilon(f)
            x = [epsilon / 2 / math.sqrt(system.n)] * system.n
            logger.info(f"numeric check at default point x={x}")
        if len(x) != system.n:
            raise ConfigError(f"point has {len(x)} coordinates, expected {system.n}")
        orders = list(orders) if orders else default_orders(system.order)
        table = analytic_oracle.compare_partial_sums(system, x, orders, tol)
        report = ReportOut(
            n=system.n,
            order=system.order,
            command=Command.NUMERIC_CHECK,
            numeric=[
                NumericRowOut(
                    order=row.order,
                    series_value=row.series_value,
                    oracle_value=row.oracle_value,
                    abs_error=row.abs_error,
                )
                for row in table.rows
            ],
        )
        failures = []
        if not table.is_monotone():
            failures.append("errors are not non-increasing")
        if not table.within_rate(radius):
            failures.append(f"log-error slope {table.fitted_slope():.3f} above the rate for radius {radius}")
        if max_error is not None and table.final_error > max_error:
            failures.append(f"final error {table.final_error:.3e} above {max_error:.3e}")
        for failure in failures:
            logger.warning(f"numeric check: {failure}")
        return WorkflowResult(report, EXIT_MISMATCH if failures else EXIT_OK)

    def demo(self, name: str, order: Optional[int] = None, sabotage: bool = False) -> WorkflowResult:
        demo = demo_service.get(name)
        order = demo.default_order if order is None else order
        if not 0 <= order <= settings.max_order:
            raise ConfigError(f"order must lie in 0..{settings.max_order}, got {order}")
        system = demo_service.build(name, order)
        result = inversion_engine.verify_identity(system, sabotage=sabotage)
        g_1 = inversion_engine.solve_fixed_point(system).g[0]

        rows = []
        fixture_failures = 0
        for k, left, right in result.comparisons:
            expected = demo.identity_coefficient(k)
            g_value = coefficient(g_1, k)
            g_expected = demo.g_coefficient(k)
            if left != expected or right != expected or g_value != g_expected:
                fixture_failures += 1
            rows.append(RowOut(
                k=list(k),
                lhs=format_rational(left),
                rhs=format_rational(right),
                expected=format_rational(expected),
                g=format_rational(g_value),
                g_expected=format_rational(g_expected),
            ))
        if fixture_failures:
            logger.warning(f"demo {name}: {fixture_failures} rows disagree with the fixture")

        report = ReportOut(
            n=system.n,
            order=system.order,
            command=Command.DEMO,
            name=name,
            checked=result.checked,
            mismatches=[
                MismatchOut(k=list(m.k), lhs=format_rational(m.lhs), rhs=format_rational(m.rhs))
                for m in result.mismatches
            ],
            rows=rows,
        )
        ok = result.ok and not fixture_failures
        return WorkflowResult(report, EXIT_OK if ok else EXIT_MISMATCH)


inversion_service = InversionService()
