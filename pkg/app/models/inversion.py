"""Lagrange-Good inversion engine

Solves g_i = x_i f_i(g), builds phi(g) / det(delta_ij - x_i d_j f_i(g)) and
compares its coefficients with those of phi * f_1^k_1 ... f_n^k_n.
The two sides never share code beyond the series primitives: the left side
goes through solve / compose / determinant / reciprocal, the right side
through power / mul / coefficient extraction.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from ..core.config import settings
from ..core.errors import ConfigError, IndexOutOfRange, InvalidOrder, SeriesError, VariableCountMismatch
from .series import (
    MultiIndex,
    Series,
    SeriesMatrix,
    box_truncate,
    coefficient,
    compose,
    compose_many,
    determinant,
    grlex_key,
    make_constant,
    make_variable,
    mul,
    mul_variable,
    multi_index_count,
    multi_indices,
    partial_derivative,
    power,
    reciprocal,
    sub,
    truncate,
    zero_series,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class SeriesSystem:
    """One Lagrange-Good instance (phi, f_1..f_n) at truncation order N"""
    phi: Series
    f: Tuple[Series, ...]

    def __post_init__(self):
        object.__setattr__(self, "f", tuple(self.f))
        n = len(self.f)
        if n < 1:
            raise SeriesError("a system needs at least one f_i")
        for member in (self.phi,) + self.f:
            if member.n != n:
                raise VariableCountMismatch(f"every member must have {n} variables, got {member.n}")
            if member.order != self.phi.order:
                raise InvalidOrder("phi and all f_i must share the truncation order")

    @property
    def n(self) -> int:
        return len(self.f)

    @property
    def order(self) -> int:
        return self.phi.order

    def truncate(self, order: int) -> "SeriesSystem":
        return SeriesSystem(truncate(self.phi, order), tuple(truncate(fi, order) for fi in self.f))

    def lift(self, order: int) -> "SeriesSystem":
        """Re-embed at a higher order; the new layers are zero"""
        if order < self.order:
            raise InvalidOrder(f"cannot lift order {self.order} system to {order}")
        return SeriesSystem(
            Series(self.n, order, self.phi.terms),
            tuple(Series(self.n, order, fi.terms) for fi in self.f),
        )

    def permute(self, sigma: Sequence[int]) -> "SeriesSystem":
        """Relabel variables: new variable i is old variable sigma[i] (0-based)"""
        sigma = tuple(sigma)
        if sorted(sigma) != list(range(self.n)):
            raise IndexOutOfRange(f"{sigma} is not a permutation of 0..{self.n - 1}")

        def relabel(s: Series) -> Series:
            return Series(s.n, s.order, {tuple(k[sigma[i]] for i in range(self.n)): c
                                         for k, c in s.terms.items()})

        return SeriesSystem(relabel(self.phi), tuple(relabel(self.f[sigma[i]]) for i in range(self.n)))


@dataclass(frozen=True)
class FixedPointSolution:
    g: Tuple[Series, ...]
    residual_ok: bool
    iterations: int

    @property
    def order(self) -> int:
        return self.g[0].order


@dataclass(frozen=True)
class Mismatch:
    k: MultiIndex
    lhs: Fraction
    rhs: Fraction


@dataclass(frozen=True, eq=False)
class VerificationReport:
    n: int
    order: int
    checked: int
    mismatches: List[Mismatch]
    lhs_series: Series
    comparisons: List[Tuple[MultiIndex, Fraction, Fraction]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.mismatches


class InversionEngine:
    """
    Moteur d'inversion de Lagrange-Good.
    Résout le système de point fixe et compare les deux membres de l'identité.
    """

    def __init__(
        self,
        max_variables: Optional[int] = None,
        verify_workers: Optional[int] = None,
        rhs_memo: Optional[bool] = None,
    ):
        self.max_variables = settings.max_variables if max_variables is None else max_variables
        self.verify_workers = settings.verify_workers if verify_workers is None else verify_workers
        self.rhs_memo = settings.rhs_memo if rhs_memo is None else rhs_memo

    # Fixed point

    def solve_fixed_point(self, system: SeriesSystem) -> FixedPointSolution:
        """Picard iteration from g = 0; iteration t fixes graded layer t"""
        n, order = system.n, system.order
        g = [zero_series(n, 0) for _ in range(n)]
        for t in range(1, order + 1):
            f_t = [truncate(fi, t - 1) for fi in system.f]
            values = compose_many(f_t, g)
            g = [mul_variable(values[i], i + 1) for i in range(n)]
            logger.debug(f"fixed point iteration {t}/{order} done")

        residuals = self.residual(system, g)
        residual_ok = all(not r for r in residuals)
        if not residual_ok:
            logger.error("fixed point residual does not vanish")
        return FixedPointSolution(g=tuple(g), residual_ok=residual_ok, iterations=order)

    def residual(self, system: SeriesSystem, g: Sequence[Series]) -> List[Series]:
        """g_i - x_i f_i(g) at the order of g"""
        values = compose_many(system.f, g)
        return [sub(g[i], mul_variable(values[i], i + 1)) for i in range(system.n)]

    # Left-hand side

    def jacobian_matrix(
        self, system: SeriesSystem, solution: Optional[FixedPointSolution] = None
    ) -> SeriesMatrix:
        """Entries delta_ij - x_i (d_j f_i)(g) at the system order

        Works internally at order N+1 so that d_j f_i is known to order N.
        """
        order = system.order
        lifted = system.lift(order + 1)
        if solution is None or solution.order < order + 1:
            solution = self.solve_fixed_point(lifted)
        g = [truncate(gi, order + 1) for gi in solution.g]
        n = system.n
        partials = [partial_derivative(lifted.f[i], j + 1) for i in range(n) for j in range(n)]
        composed = compose_many(partials, g)
        rows = []
        for i in range(n):
            x_i = make_variable(i + 1, n, order + 1)
            row = []
            for j in range(n):
                term = mul(x_i, composed[i * n + j])
                delta = make_constant(1 if i == j else 0, n, order)
                row.append(sub(delta, term))
            rows.append(row)
        return SeriesMatrix(rows)

    def lhs_series(self, system: SeriesSystem) -> Series:
        """phi(g) / det(delta_ij - x_i d_j f_i(g)) truncated at N"""
        order = system.order
        lifted = system.lift(order + 1)
        solution = self.solve_fixed_point(lifted)
        matrix = self.jacobian_matrix(system, solution)
        det = determinant(matrix)
        if det.constant != 1:
            raise SeriesError(f"determinant constant term is {det.constant}, expected 1")
        phi_g = truncate(compose(lifted.phi, solution.g), order)
        return mul(phi_g, reciprocal(det))

    # Right-hand side

    def rhs_coefficient(
        self,
        system: SeriesSystem,
        k: Sequence[int],
        memo: Optional[Dict[Tuple[int, int], Series]] = None,
    ) -> Fraction:
        """[x^k] phi * f_1^k_1 ... f_n^k_n

        Products are reduced modulo x_i^(k_i + 1): only terms dividing x^k can
        reach the coefficient of x^k.
        """
        k = tuple(k)
        if len(k) != system.n:
            raise VariableCountMismatch(f"multi-index {k} has length {len(k)}, expected {system.n}")
        product = box_truncate(system.phi, k)
        for i, e in enumerate(k):
            if not e:
                continue
            if memo is not None:
                key = (i, e)
                if key not in memo:
                    memo[key] = power(system.f[i], e)
                factor = box_truncate(memo[key], k)
            else:
                factor = power(system.f[i], e, box=k)
            product = mul(product, factor, box=k)
        return coefficient(product, k)

    # Verification

    def verify_identity(self, system: SeriesSystem, sabotage: bool = False) -> VerificationReport:
        """Compare both sides on every multi-index |k| <= N"""
        if system.n > self.max_variables:
            raise ConfigError(f"n = {system.n} exceeds the cap of {self.max_variables} variables")
        lhs = self.lhs_series(system)
        indices = list(multi_indices(system.n, system.order))
        memo: Optional[Dict[Tuple[int, int], Series]] = {} if self.rhs_memo else None

        def compare(k: MultiIndex) -> Tuple[MultiIndex, Fraction, Fraction]:
            rhs = self.rhs_coefficient(system, k, memo)
            if sabotage and sum(k) > 0:
                rhs += 1
            return k, coefficient(lhs, k), rhs

        if self.verify_workers > 0:
            with ThreadPoolExecutor(max_workers=self.verify_workers) as pool:
                comparisons = list(pool.map(compare, indices))
        else:
            comparisons = [compare(k) for k in indices]

        comparisons.sort(key=lambda row: grlex_key(row[0]))
        mismatches = [Mismatch(k, left, right) for k, left, right in comparisons if left != right]
        checked = len(comparisons)
        assert checked == multi_index_count(system.n, system.order)

        if mismatches:
            logger.warning(f"identity check: {len(mismatches)}/{checked} mismatches (n={system.n}, N={system.order})")
        else:
            logger.info(f"identity check: {checked} coefficients agree (n={system.n}, N={system.order})")
        return VerificationReport(
            n=system.n,
            order=system.order,
            checked=checked,
            mismatches=mismatches,
            lhs_series=lhs,
            comparisons=comparisons,
        )

    # Univariate specialization

    def classic_lagrange_check(self, f: Series, phi: Series, k: int) -> Tuple[Fraction, Fraction]:
        """([x^k] phi(g), (1/k) [u^(k-1)] phi' f^k) for g = x f(g)"""
        if f.n != 1 or phi.n != 1:
            raise VariableCountMismatch("the classical form is univariate")
        if k < 1:
            raise SeriesError(f"k must be positive, got {k}")
        order = min(f.order, phi.order)
        if order < k:
            raise InvalidOrder(f"series known to order {order}, need at least {k}")
        if not f.constant:
            raise SeriesError("the classical form requires f(0) != 0")
        f, phi = truncate(f, order), truncate(phi, order)
        solution = self.solve_fixed_point(SeriesSystem(phi, (f,)))
        composed = coefficient(compose(phi, solution.g), (k,))
        classical = coefficient(mul(partial_derivative(phi, 1), power(f, k)), (k - 1,))
        return composed, classical / k


inversion_engine = InversionEngine()
