"""
Command-line front end

Usage:
    python -m app verify -n 1 -N 6 --phi "x1" --f "1/(1-x1)"
    python -m app coeff -n 2 -N 4 --phi "1" --f1 "1+x2" --f2 "1+x1" -k 1,1
    python -m app solve -N 5 --f "inv(1-x1)"
    python -m app numeric-check -N 8 --f "1/(1-x1)" --x 0.1 --orders 2,4,6,8
    python -m app demo catalan --format json

Exit codes: 0 success, 1 mismatch, 2 usage/parse error, 3 numeric non-convergence.
"""
import argparse
import logging
import sys
from typing import List, Optional, Sequence, TextIO

from pydantic import BaseModel, Field, ValidationError, field_validator

from .core.config import settings
from .core.errors import ConfigError, LagrangeGoodError
from .core.logging_config import configure_logging
from .schemas.report import Command, ErrorOut, OutputFormat
from .services.demo_service import DEMOS
from .services.inversion_service import WorkflowResult, inversion_service
from .services.report_service import report_service

logger = logging.getLogger(__name__)

MAX_INDEXED_F = 8


class RunConfig(BaseModel):
    """Validated run configuration"""
    command: Command
    n: int = Field(default=1)
    order: Optional[int] = Field(default=None, ge=0)
    names: Optional[List[str]] = None
    output_format: OutputFormat = OutputFormat.TEXT
    phi: str = "1"
    f: List[str] = Field(default_factory=list)
    k: Optional[List[int]] = None
    x: Optional[List[float]] = None
    tol: Optional[float] = Field(default=None, gt=0)
    orders: Optional[List[int]] = None
    radius: Optional[float] = Field(default=None, gt=0)
    max_error: Optional[float] = Field(default=None, gt=0)
    demo: Optional[str] = None
    sabotage: Optional[str] = None

    @field_validator("n")
    @classmethod
    def check_n(cls, value: int) -> int:
        if not 1 <= value <= settings.max_variables:
            raise ValueError(f"n must lie in 1..{settings.max_variables}")
        return value


def _int_list(text: Optional[str], flag: str) -> Optional[List[int]]:
    if text is None:
        return None
    try:
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigError(f"{flag} expects comma-separated integers, got '{text}'") from e


def _float_list(text: Optional[str], flag: str) -> Optional[List[float]]:
    if text is None:
        return None
    try:
        return [float(part) for part in text.split(",") if part.strip()]
    except ValueError as e:
        raise ConfigError(f"{flag} expects comma-separated numbers, got '{text}'") from e


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-n", type=int, default=None, help="number of variables")
    common.add_argument("-N", dest="order", type=int, default=None, help="truncation order (total degree)")
    common.add_argument("--phi", default="1", help="expression for phi")
    common.add_argument("--f", dest="f_list", action="append", default=[], help="expression for the next f_i (repeatable)")
    for i in range(1, MAX_INDEXED_F + 1):
        common.add_argument(f"--f{i}", dest=f"f{i}", default=None, help=argparse.SUPPRESS)
    common.add_argument("-k", default=None, help="multi-index, comma-separated")
    common.add_argument("--format", dest="output_format", choices=[f.value for f in OutputFormat], default="text")
    common.add_argument("--x", default=None, help="evaluation point, comma-separated floats")
    common.add_argument("--tol", type=float, default=None, help="contraction tolerance")
    common.add_argument("--orders", default=None, help="partial-sum orders, comma-separated")
    common.add_argument("--radius", type=float, default=None, help="radius of convergence for the numeric-check rate")
    common.add_argument("--max-error", dest="max_error", type=float, default=None, help="bound on the last partial-sum error")
    common.add_argument("--vars", default=None, help="variable names, comma-separated")
    common.add_argument("--sabotage", choices=["rhs"], default=None, help=argparse.SUPPRESS)
    common.add_argument("--log-json", action="store_true", help="JSON log lines on stderr")
    common.add_argument("-v", "--verbose", action="store_true", help="debug logging")

    parser = argparse.ArgumentParser(
        prog="lagrange-good",
        description="Exact truncated power series and the Lagrange-Good inversion formula",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="solve g_i = x_i f_i(g) to order N")
    sub.add_parser("coeff", parents=[common], help="one LHS and RHS coefficient")
    sub.add_parser("verify", parents=[common], help="compare all coefficients up to order N")
    sub.add_parser("numeric-check", parents=[common], help="partial sums vs contraction oracle")
    demo = sub.add_parser("demo", parents=[common], help="built-in instance with fixtures")
    demo.add_argument("demo", choices=sorted(DEMOS), help="demo name")
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    indexed = [getattr(args, f"f{i}") for i in range(1, MAX_INDEXED_F + 1)]
    if any(indexed):
        if args.f_list:
            raise ConfigError("use either --f or --f1..--f8, not both")
        last = max(i for i, expr in enumerate(indexed) if expr)
        if not all(indexed[: last + 1]):
            raise ConfigError("--f1..--f8 must be given without gaps")
        f = indexed[: last + 1]
    else:
        f = list(args.f_list)

    names = [name.strip() for name in args.vars.split(",")] if args.vars else None
    n = args.n if args.n is not None else (len(f) or (len(names) if names else 1))
    try:
        return RunConfig(
            command=Command(args.command),
            n=n,
            order=args.order,
            names=names,
            output_format=OutputFormat(args.output_format),
            phi=args.phi,
            f=f,
            k=_int_list(args.k, "-k"),
            x=_float_list(args.x, "--x"),
            tol=args.tol,
            orders=_int_list(args.orders, "--orders"),
            radius=args.radius,
            max_error=args.max_error,
            demo=getattr(args, "demo", None),
            sabotage=args.sabotage,
        )
    except ValidationError as e:
        raise ConfigError(f"invalid run configuration: {e.errors()[0]['msg']}") from e


def _execute(config: RunConfig) -> WorkflowResult:
    sabotage = config.sabotage == "rhs"
    if config.command == Command.DEMO:
        return inversion_service.demo(config.demo, config.order, sabotage=sabotage)

    if config.order is None:
        raise ConfigError(f"{config.command.value} requires -N")
    if not config.f:
        raise ConfigError(f"{config.command.value} requires --f (one per variable)")
    system = inversion_service.build_system(config.n, config.order, config.phi, config.f, config.names)

    if config.command == Command.SOLVE:
        return inversion_service.solve(system)
    if config.command == Command.COEFF:
        if config.k is None:
            raise ConfigError("coeff requires -k")
        return inversion_service.coefficient(system, config.k)
    if config.command == Command.VERIFY:
        return inversion_service.verify(system, sabotage=sabotage)
    return inversion_service.numeric_check(
        system, config.x, config.orders, config.tol, config.radius, config.max_error
    )


def run(config: RunConfig, out: Optional[TextIO] = None) -> int:
    """Execute one command; the report goes to stdout, the exit code is returned"""
    out = out or sys.stdout
    result = _execute(config)
    names = config.names if config.command != Command.DEMO else None
    out.write(report_service.format_report(result.report, config.output_format, names))
    out.flush()
    logger.info(f"{config.command.value} finished with exit code {result.exit_code}")
    return result.exit_code


def _report_error(error: LagrangeGoodError, fmt: str) -> None:
    payload = ErrorOut(error=type(error).__name__, message=str(error), exit_code=error.exit_code)
    if fmt == OutputFormat.JSON.value:
        sys.stderr.write(report_service.error_json(payload) + "\n")
    else:
        sys.stderr.write(f"error: {payload.error}: {payload.message}\n")


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    configure_logging("DEBUG" if args.verbose else None, True if args.log_json else None)
    try:
        return run(config_from_args(args))
    except LagrangeGoodError as e:
        logger.error(f"{args.command} failed: {e}")
        _report_error(e, args.output_format)
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
