"""Acceptance suite for the Lagrange-Good identity

Random systems, the Catalan and Cayley fixtures, and the tie to the
classical univariate form.
"""
from fractions import Fraction
from math import factorial

from hypothesis import given, settings, strategies as st

from app.models.inversion import SeriesSystem, inversion_engine
from app.models.series import (
    Series,
    coefficient,
    make_constant,
    make_variable,
    mul,
    multi_index_count,
    partial_derivative,
    reciprocal,
    sub,
    truncate,
)
from app.services.demo_service import (
    catalan_identity_coefficient,
    catalan_numbers,
    cayley_g_coefficient,
    cayley_identity_coefficient,
    demo_service,
)
from tests.strategies import polynomial_systems, rationals, series


class TestRandomSystems:
    """Identité principale sur des systèmes polynomiaux aléatoires"""

    @settings(max_examples=200, deadline=None)
    @given(polynomial_systems())
    def test_zero_mismatches(self, sys_):
        """Aucun écart sur les C(N+n, n) coefficients"""
        report = inversion_engine.verify_identity(sys_)
        assert report.checked == multi_index_count(sys_.n, sys_.order)
        assert report.mismatches == []


class TestFixtures:
    """Fixtures Catalan et Cayley calculées indépendamment"""

    def test_catalan_order_ten(self):
        """f = 1/(1-u), phi = u, N=10"""
        system = demo_service.build("catalan", 10)
        report = inversion_engine.verify_identity(system)
        g = inversion_engine.solve_fixed_point(system).g[0]
        catalan = catalan_numbers(10)
        assert catalan[:6] == [1, 1, 2, 5, 14, 42]
        assert report.ok
        for (k, left, right) in report.comparisons:
            (degree,) = k
            assert left == right == catalan_identity_coefficient(k)
            if degree >= 1:
                assert coefficient(g, k) == catalan[degree - 1]

    def test_cayley_order_eight(self):
        """f = e^u tronquée au degré 10, phi = u, N=8"""
        f = Series(1, 10, {(e,): Fraction(1, factorial(e)) for e in range(11)})
        system = SeriesSystem(Series(1, 10, {(1,): 1}), (f,)).truncate(8)
        report = inversion_engine.verify_identity(system)
        g = inversion_engine.solve_fixed_point(system).g[0]
        assert report.ok
        for (k, left, right) in report.comparisons:
            assert left == right == cayley_identity_coefficient(k)
            assert coefficient(g, k) == cayley_g_coefficient(k)
        assert coefficient(g, (8,)) == Fraction(8 ** 7, factorial(8))


def classical_weight(phi: Series, f: Series) -> Series:
    """psi = phi (1 - u f'/f): its Good-form left side has the coefficients of phi(g)"""
    order = f.order - 1
    u = make_variable(1, 1, order)
    ratio = mul(partial_derivative(f, 1), reciprocal(truncate(f, order)))
    return mul(truncate(phi, order), sub(make_constant(1, 1, order), mul(u, ratio)))


class TestClassicalCoherence:
    """Forme classique contre forme de Good"""

    @settings(max_examples=50, deadline=None)
    @given(
        series(1, 7, max_terms=4, max_degree=3),
        rationals(nonzero=True),
        series(1, 7, max_terms=3, max_degree=3),
        st.integers(1, 6),
    )
    def test_three_way_agreement(self, f_tail, f0, phi_raw, k):
        """[x^k] phi(g) par la forme classique, la composition et le LHS de Good"""
        f = Series(1, 7, {**dict(f_tail.terms), (0,): f0})
        phi = Series(1, 7, {key: c for key, c in phi_raw.terms.items() if key != (0,)})

        composed, classical = inversion_engine.classic_lagrange_check(f, phi, k)
        assert composed == classical

        psi = classical_weight(phi, f)
        good = SeriesSystem(psi, (truncate(f, psi.order),))
        assert coefficient(inversion_engine.lhs_series(good), (k,)) == composed
        assert inversion_engine.rhs_coefficient(good, (k,)) == composed
