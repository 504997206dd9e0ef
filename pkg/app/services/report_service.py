"""Rendering of workflow reports as text, JSON or CSV"""
import csv
import io
import json
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

from ..models.oracle import PartialSumRow, PartialSumTable
from ..models.series import Series, default_names, to_text
from ..schemas.report import Command, ErrorOut, OutputFormat, ReportOut


def _k_text(k: Sequence[int]) -> str:
    return "(" + ",".join(str(e) for e in k) + ")"


def _k_csv(k: Sequence[int]) -> str:
    return ";".join(str(e) for e in k)


class ReportService:
    """Formats reports; all output goes through a single writer"""

    def format_report(self, report: ReportOut, fmt: OutputFormat = OutputFormat.TEXT,
                      names: Optional[Sequence[str]] = None) -> str:
        fmt = OutputFormat(fmt)
        if fmt == OutputFormat.JSON:
            return self.to_json(report)
        if fmt == OutputFormat.CSV:
            return self.to_csv(report)
        return self.to_text(report, names)

    # JSON

    def to_json(self, report: ReportOut) -> str:
        payload = report.model_dump(mode="json", exclude_none=True)
        # stable schema check
        ReportOut.model_validate(payload)
        return json.dumps(payload, indent=2)

    def error_json(self, error: ErrorOut) -> str:
        return json.dumps(error.model_dump(), indent=2)

    # CSV

    def to_csv(self, report: ReportOut) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        command = Command(report.command)
        if command == Command.SOLVE:
            writer.writerow(["i", "k", "c"])
            for term in report.series or []:
                writer.writerow([term.i, _k_csv(term.k), term.c])
        elif command == Command.NUMERIC_CHECK:
            writer.writerow(["order", "series_value", "oracle_value", "abs_error"])
            for row in report.numeric or []:
                writer.writerow([row.order, repr(row.series_value), repr(row.oracle_value), repr(row.abs_error)])
        else:
            with_fixture = command == Command.DEMO
            header = ["k", "lhs", "rhs"] + (["expected", "g", "g_expected"] if with_fixture else [])
            writer.writerow(header)
            for row in report.rows or []:
                values = [_k_csv(row.k), row.lhs, row.rhs]
                if with_fixture:
                    values += [row.expected, row.g, row.g_expected]
                writer.writerow(values)
        return buffer.getvalue()

    # Text

    def to_text(self, report: ReportOut, names: Optional[Sequence[str]] = None) -> str:
        names = list(names) if names else default_names(report.n)
        command = Command(report.command)
        if command == Command.SOLVE:
            return self._solve_text(report, names)
        if command == Command.NUMERIC_CHECK:
            return self._numeric_text(report)
        return self._comparison_text(report, command)

    def _solve_text(self, report: ReportOut, names: List[str]) -> str:
        grouped: Dict[int, Dict[tuple, Fraction]] = {i: {} for i in range(1, report.n + 1)}
        for term in report.series or []:
            grouped[term.i][tuple(term.k)] = Fraction(term.c)
        lines = [f"Fixed point g_i = x_i f_i(g)  (n={report.n}, N={report.order})"]
        for i, terms in grouped.items():
            lines.append(f"g{i} = {to_text(Series(report.n, report.order, terms), names)}")
        return "\n".join(lines) + "\n"

    def _comparison_text(self, report: ReportOut, command: Command) -> str:
        mismatched = {tuple(m.k) for m in report.mismatches or []}
        title = f"demo {report.name}" if command == Command.DEMO else command.value
        lines = [
            f"Lagrange-Good {title}  (n={report.n}, N={report.order}): "
            f"{report.checked} coefficients checked, {len(mismatched)} mismatches"
        ]
        with_fixture = command == Command.DEMO
        header = f"{'k':<14} {'lhs':>16} {'rhs':>16}"
        if with_fixture:
            header += f" {'expected':>16} {'g1':>14} {'g1 expected':>14}"
        lines.append(header)
        for row in report.rows or []:
            line = f"{_k_text(row.k):<14} {row.lhs:>16} {row.rhs:>16}"
            flags = []
            if tuple(row.k) in mismatched:
                flags.append("MISMATCH")
            if with_fixture:
                line += f" {row.expected:>16} {row.g:>14} {row.g_expected:>14}"
                if row.lhs != row.expected or row.rhs != row.expected or row.g != row.g_expected:
                    flags.append("FIXTURE")
            if flags:
                line += "  " + " ".join(flags)
            lines.append(line)
        return "\n".join(lines) + "\n"

    def _numeric_text(self, report: ReportOut) -> str:
        rows = report.numeric or []
        lines = [
            f"Partial sums vs contraction oracle  (n={report.n}, N={report.order})",
            f"{'N':>4} {'series_value':>22} {'oracle_value':>22} {'abs_error':>12}",
        ]
        for row in rows:
            lines.append(f"{row.order:>4} {row.series_value:>22.15g} {row.oracle_value:>22.15g} {row.abs_error:>12.3e}")
        table = PartialSumTable(
            x=(),
            rows=[PartialSumRow(r.order, r.series_value, r.oracle_value, r.abs_error) for r in rows],
        )
        slope = table.fitted_slope()
        slope_text = "n/a" if slope is None else f"{slope:.3f}"
        lines.append(f"monotone: {'yes' if table.is_monotone() else 'no'}; fitted log-error slope: {slope_text}")
        return "\n".join(lines) + "\n"


report_service = ReportService()
