"""Tests du moteur d'inversion de Lagrange-Good"""
from fractions import Fraction
from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from app.core.errors import ConfigError, InvalidOrder, SeriesError, VariableCountMismatch
from app.models.inversion import InversionEngine, SeriesSystem, inversion_engine
from app.models.series import (
    Series,
    coefficient,
    determinant,
    make_constant,
    multi_indices,
    reciprocal,
)
from app.services.demo_service import exponential_system, geometric_system, pair_system
from tests.strategies import polynomial_systems


def univariate(order, terms):
    return Series(1, order, terms)


def system(phi, *f):
    return SeriesSystem(phi, tuple(f))


class TestSeriesSystem:
    """Tests du conteneur de système"""

    def test_members_must_agree(self):
        """phi et f_i partagent n et N"""
        with pytest.raises(VariableCountMismatch):
            system(make_constant(1, 2, 3), make_constant(1, 1, 3))
        with pytest.raises(InvalidOrder):
            system(make_constant(1, 1, 3), make_constant(1, 1, 4))
        with pytest.raises(SeriesError):
            SeriesSystem(make_constant(1, 1, 3), ())

    def test_lift_pads_with_zeros(self):
        """lift garde les termes et augmente l'ordre"""
        lifted = geometric_system(3).lift(5)
        assert lifted.order == 5
        assert coefficient(lifted.f[0], (4,)) == 0
        assert coefficient(lifted.f[0], (3,)) == 1

    def test_truncate(self):
        """truncate descend l'ordre de chaque membre"""
        small = geometric_system(8).truncate(3)
        assert small.order == 3
        assert all(m.order == 3 for m in (small.phi,) + small.f)

    def test_permute(self):
        """La variable i devient l'ancienne variable sigma[i]"""
        phi = Series(2, 3, {(1, 0): 1})
        f1 = Series(2, 3, {(0, 0): 1, (0, 1): 2})
        f2 = Series(2, 3, {(0, 0): 3})
        swapped = system(phi, f1, f2).permute((1, 0))
        assert dict(swapped.phi.terms) == {(0, 1): 1}
        assert dict(swapped.f[0].terms) == {(0, 0): 3}
        assert dict(swapped.f[1].terms) == {(0, 0): 1, (1, 0): 2}


class TestFixedPoint:
    """Tests de la résolution g_i = x_i f_i(g)"""

    def test_catalan(self):
        """f = 1/(1-u), N=5: nombres de Catalan"""
        g = inversion_engine.solve_fixed_point(geometric_system(5)).g[0]
        assert dict(g.terms) == {(1,): 1, (2,): 1, (3,): 2, (4,): 5, (5,): 14}

    def test_cayley(self):
        """f = e^u, N=4: k^(k-1)/k!"""
        g = inversion_engine.solve_fixed_point(exponential_system(4)).g[0]
        assert dict(g.terms) == {(1,): 1, (2,): 1, (3,): Fraction(3, 2), (4,): Fraction(8, 3)}

    def test_bivariate_pair(self):
        """f1 = 1+u2, f2 = 1+u1, N=4"""
        g1 = inversion_engine.solve_fixed_point(pair_system(4)).g[0]
        assert dict(g1.terms) == {(1, 0): 1, (1, 1): 1, (2, 1): 1, (2, 2): 1}

    def test_exactly_n_iterations_and_residual(self):
        """N itérations, résidu nul"""
        solution = inversion_engine.solve_fixed_point(geometric_system(6))
        assert solution.iterations == 6
        assert solution.residual_ok
        assert solution.order == 6
        assert all(len(r) == 0 for r in inversion_engine.residual(geometric_system(6), solution.g))

    def test_order_zero(self):
        """À l'ordre 0, g est nul"""
        solution = inversion_engine.solve_fixed_point(geometric_system(0))
        assert len(solution.g[0]) == 0
        assert solution.residual_ok

    @settings(max_examples=50, deadline=None)
    @given(polynomial_systems(order=5))
    def test_residual_and_valuation(self, sys_):
        """Résidu nul, [x^0] g_i = 0 et couche de degré 1 = f_i(0) x_i"""
        solution = inversion_engine.solve_fixed_point(sys_)
        assert solution.residual_ok
        for i, gi in enumerate(solution.g):
            assert gi.constant == 0
            for j in range(sys_.n):
                k = tuple(1 if m == j else 0 for m in range(sys_.n))
                expected = sys_.f[i].constant if j == i else 0
                assert coefficient(gi, k) == expected

    def test_zero_constant_f(self):
        """f(0) = 0: g reste nul (valuation infinie)"""
        solution = inversion_engine.solve_fixed_point(
            system(univariate(4, {(1,): 1}), univariate(4, {(1,): 1, (2,): 3}))
        )
        assert len(solution.g[0]) == 0


class TestJacobian:
    """Tests de la matrice delta_ij - x_i d_j f_i(g)"""

    def test_constant_f_gives_identity(self):
        """f_i = 1: matrice identité"""
        sys_ = SeriesSystem(make_constant(1, 3, 3), tuple(make_constant(1, 3, 3) for _ in range(3)))
        matrix = inversion_engine.jacobian_matrix(sys_)
        for i in range(1, 4):
            for j in range(1, 4):
                assert matrix.entry(i, j) == make_constant(1 if i == j else 0, 3, 3)

    def test_linear_f(self):
        """n=1, f = 1+u, N=2: [[1 - x]]"""
        sys_ = system(make_constant(1, 1, 2), univariate(2, {(0,): 1, (1,): 1}))
        matrix = inversion_engine.jacobian_matrix(sys_)
        assert matrix.entry(1, 1) == univariate(2, {(0,): 1, (1,): -1})
        assert matrix.order == 2

    def test_pair(self):
        """Paire bivariée: [[1, -x1], [-x2, 1]]"""
        matrix = inversion_engine.jacobian_matrix(pair_system(4))
        assert matrix.entry(1, 1) == make_constant(1, 2, 4)
        assert matrix.entry(1, 2) == Series(2, 4, {(1, 0): -1})
        assert matrix.entry(2, 1) == Series(2, 4, {(0, 1): -1})
        assert matrix.entry(2, 2) == make_constant(1, 2, 4)

    @settings(max_examples=50, deadline=None)
    @given(polynomial_systems(order=4))
    def test_determinant_constant_is_one(self, sys_):
        """det(jacobian) a un terme constant égal à 1"""
        assert determinant(inversion_engine.jacobian_matrix(sys_)).constant == 1


class TestLhsAndRhs:
    """Tests des deux membres de l'identité"""

    def test_trivial_lhs(self):
        """phi = 1, f_i = 1: LHS = 1"""
        sys_ = SeriesSystem(make_constant(1, 2, 4), (make_constant(1, 2, 4), make_constant(1, 2, 4)))
        assert inversion_engine.lhs_series(sys_) == make_constant(1, 2, 4)

    def test_central_binomials(self):
        """phi = 1, f = 1/(1-u), N=3: 1 + x + 3x^2 + 10x^3"""
        sys_ = system(make_constant(1, 1, 3), geometric_system(3).f[0])
        assert dict(inversion_engine.lhs_series(sys_).terms) == {(0,): 1, (1,): 1, (2,): 3, (3,): 10}

    def test_cayley_lhs(self):
        """phi = u, f = e^u, N=3: x + 2x^2 + 9/2 x^3"""
        lhs = inversion_engine.lhs_series(exponential_system(3))
        assert dict(lhs.terms) == {(1,): 1, (2,): 2, (3,): Fraction(9, 2)}

    def test_rhs_examples(self):
        """k = 0 donne phi(0); [x^3](1-x)^-3 = 10; paire (1,1) = 1"""
        sys_ = system(univariate(4, {(0,): 7, (1,): 1}), geometric_system(4).f[0])
        assert inversion_engine.rhs_coefficient(sys_, (0,)) == 7
        catalan_one = system(make_constant(1, 1, 4), geometric_system(4).f[0])
        assert inversion_engine.rhs_coefficient(catalan_one, (3,)) == 10
        assert inversion_engine.rhs_coefficient(pair_system(4), (1, 1)) == 1

    def test_rhs_memo_matches_fresh_products(self):
        """Le cache de puissances ne change pas le résultat"""
        sys_ = exponential_system(6)
        memo = {}
        for k in multi_indices(1, 6):
            assert inversion_engine.rhs_coefficient(sys_, k, memo) == \
                inversion_engine.rhs_coefficient(sys_, k)


class TestVerifyIdentity:
    """Tests de la vérification complète"""

    def test_zero_phi(self):
        """phi = 0: tous les coefficients nuls des deux côtés"""
        sys_ = system(make_constant(0, 1, 5), geometric_system(5).f[0])
        report = inversion_engine.verify_identity(sys_)
        assert report.ok
        assert all(left == 0 and right == 0 for _, left, right in report.comparisons)

    def test_catalan_sequence(self):
        """phi = u, f = 1/(1-u), N=6: C(2k-2, k-1) des deux côtés"""
        report = inversion_engine.verify_identity(geometric_system(6))
        assert report.ok
        assert report.checked == 7
        assert [left for _, left, _ in report.comparisons] == [0, 1, 2, 6, 20, 70, 252]
        assert [right for _, _, right in report.comparisons] == [0] + [comb(2 * k - 2, k - 1) for k in range(1, 7)]

    def test_bivariate_degree_two(self):
        """n=2, f_i de degré 2 à coefficients rationnels, N=5"""
        f1 = Series(2, 5, {(0, 0): 1, (1, 0): Fraction(1, 2), (0, 2): Fraction(-2, 3)})
        f2 = Series(2, 5, {(0, 0): Fraction(3, 4), (1, 1): 2, (0, 1): -1})
        report = inversion_engine.verify_identity(system(make_constant(1, 2, 5), f1, f2))
        assert report.ok
        assert report.checked == 21

    def test_sabotage_reports_mismatches(self):
        """Le crochet de sabotage produit des écarts triés"""
        report = inversion_engine.verify_identity(geometric_system(4), sabotage=True)
        assert not report.ok
        assert [m.k for m in report.mismatches] == [(1,), (2,), (3,), (4,)]
        assert all(m.rhs == m.lhs + 1 for m in report.mismatches)

    def test_variable_cap(self):
        """n au-delà du plafond"""
        engine = InversionEngine(max_variables=1)
        with pytest.raises(ConfigError):
            engine.verify_identity(pair_system(2))

    def test_parallel_matches_sequential(self):
        """Même rapport avec un pool de threads"""
        sys_ = pair_system(5)
        sequential = InversionEngine(verify_workers=0).verify_identity(sys_)
        parallel = InversionEngine(verify_workers=4, rhs_memo=False).verify_identity(sys_)
        assert parallel.comparisons == sequential.comparisons
        assert parallel.ok

    @settings(max_examples=25, deadline=None)
    @given(polynomial_systems(n=3, order=4), st.permutations([0, 1, 2]))
    def test_permutation_equivariance(self, sys_, sigma):
        """Renommer les variables ne change aucun coefficient comparé"""
        base = inversion_engine.verify_identity(sys_)
        permuted = inversion_engine.verify_identity(sys_.permute(sigma))
        lhs = {k: left for k, left, _ in base.comparisons}
        for k, left, right in permuted.comparisons:
            original = [0] * len(k)
            for i, e in enumerate(k):
                original[sigma[i]] = e
            assert left == lhs[tuple(original)]
            assert left == right


class TestClassicLagrange:
    """Tests de la forme univariée classique"""

    def test_linear(self):
        """phi = u, f = 1+u, k=2: (1, 1)"""
        f = univariate(3, {(0,): 1, (1,): 1})
        assert inversion_engine.classic_lagrange_check(f, univariate(3, {(1,): 1}), 2) == (1, 1)

    def test_catalan(self):
        """phi = u, f = 1/(1-u), k=4: (5, 5)"""
        f = geometric_system(5).f[0]
        assert inversion_engine.classic_lagrange_check(f, univariate(5, {(1,): 1}), 4) == (5, 5)

    def test_square_phi(self):
        """phi = u^2, f = 1+u, k=2: (1, 1)"""
        f = univariate(3, {(0,): 1, (1,): 1})
        assert inversion_engine.classic_lagrange_check(f, univariate(3, {(2,): 1}), 2) == (1, 1)

    def test_preconditions(self):
        """f(0) = 0, k < 1, ordre insuffisant, n > 1"""
        phi = univariate(3, {(1,): 1})
        with pytest.raises(SeriesError):
            inversion_engine.classic_lagrange_check(univariate(3, {(1,): 1}), phi, 2)
        with pytest.raises(SeriesError):
            inversion_engine.classic_lagrange_check(univariate(3, {(0,): 1}), phi, 0)
        with pytest.raises(InvalidOrder):
            inversion_engine.classic_lagrange_check(univariate(3, {(0,): 1}), phi, 4)
        with pytest.raises(VariableCountMismatch):
            inversion_engine.classic_lagrange_check(pair_system(3).f[0], pair_system(3).phi, 1)

    def test_lhs_reciprocal_matches_determinant(self):
        """n=1: LHS = phi(g) / (1 - x f'(g))"""
        sys_ = geometric_system(5)
        matrix = inversion_engine.jacobian_matrix(sys_)
        lhs = inversion_engine.lhs_series(sys_)
        g = inversion_engine.solve_fixed_point(sys_).g[0]
        assert lhs == g * reciprocal(matrix.entry(1, 1))
