"""Hypothesis strategies shared by the property suites"""
from fractions import Fraction
from typing import Optional

from hypothesis import strategies as st

from app.models.inversion import SeriesSystem
from app.models.series import Series, SeriesMatrix


def rationals(bound: int = 5, nonzero: bool = False):
    """p/q with p, q in [-bound, bound], q != 0"""
    numerators = st.integers(-bound, bound)
    if nonzero:
        numerators = numerators.filter(bool)
    denominators = st.integers(1, bound)
    return st.builds(Fraction, numerators, denominators)


def multi_index(n: int, max_degree: int):
    return st.lists(st.integers(0, max_degree), min_size=n, max_size=n).filter(
        lambda k: sum(k) <= max_degree
    ).map(tuple)


def series(n: int, order: int, max_terms: int = 6, max_degree: Optional[int] = None,
           constant: Optional[Fraction] = None):
    """Sparse random series; ``constant`` pins the x^0 coefficient"""
    degree = order if max_degree is None else min(order, max_degree)
    terms = st.dictionaries(multi_index(n, degree), rationals(), max_size=max_terms)

    def build(mapping):
        mapping = dict(mapping)
        if constant is not None:
            mapping[(0,) * n] = constant
        return Series(n, order, mapping)

    return terms.map(build)


def invertible_series(n: int, order: int, max_terms: int = 6):
    """Series with a nonzero constant term"""
    return st.tuples(rationals(nonzero=True), series(n, order, max_terms)).map(
        lambda pair: Series(n, order, {**dict(pair[1].terms), (0,) * n: pair[0]})
    )


def positive_valuation(n: int, order: int, max_terms: int = 5):
    """Series with zero constant term (valid inner series for compose)"""
    return series(n, order, max_terms).map(
        lambda s: Series(n, order, {k: c for k, c in s.terms.items() if sum(k) > 0})
    )


@st.composite
def series_matrices(draw, dim: int, n: int = 2, order: int = 3):
    rows = [[draw(series(n, order, max_terms=4)) for _ in range(dim)] for _ in range(dim)]
    return SeriesMatrix(rows)


@st.composite
def polynomial_systems(draw, n: Optional[int] = None, order: Optional[int] = None,
                       max_terms: int = 4):
    """phi, f_i of degree <= 3 with coefficients p/q, p, q in [-5, 5]"""
    n = draw(st.integers(1, 3)) if n is None else n
    if order is None:
        order = draw(st.integers(4, 8 if n < 3 else 6))
    phi = draw(series(n, order, max_terms=3, max_degree=3))
    f = tuple(draw(series(n, order, max_terms=max_terms, max_degree=3)) for _ in range(n))
    return SeriesSystem(phi, f)


# Expression text

def _variable_text(n: int):
    return st.integers(1, n).map(lambda i: f"x{i}")


def _literal_text():
    return st.tuples(st.integers(0, 9), st.integers(1, 9)).map(
        lambda pair: str(pair[0]) if pair[1] == 1 else f"{pair[0]}/{pair[1]}"
    )


def expression_texts(n: int):
    """Random source text accepted by the expression grammar"""
    leaves = st.one_of(_literal_text(), _variable_text(n))

    def extend(children):
        return st.one_of(
            st.tuples(children, st.sampled_from(["+", "-", "*"]), children).map(
                lambda t: f"({t[0]} {t[1]} {t[2]})"
            ),
            st.tuples(children, st.integers(0, 3)).map(lambda t: f"({t[0]})^{t[1]}"),
            children.map(lambda c: f"-({c})"),
            st.tuples(children, st.integers(1, 7)).map(lambda t: f"({t[0]}) / {t[1]}"),
            st.tuples(children, st.integers(1, 7), st.integers(1, 7)).map(
                lambda t: f"({t[0]}) / {t[1]}/{t[2]}"
            ),
            st.tuples(children, _variable_text(n)).map(lambda t: f"inv(1 + {t[1]}*({t[0]}))"),
        )

    return st.recursive(leaves, extend, max_leaves=8)
