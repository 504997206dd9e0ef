"""Truncated multivariate formal power series with exact rational coefficients

A ``Series`` is sparse: it maps multi-indices (exponent tuples) to nonzero
``Fraction`` coefficients and records the truncation order N. Only terms of
total degree <= N are known; everything above N is unknown, not zero.

Multi-indices are iterated in graded-lexicographic order: total degree
first, then descending exponent of x1, x2, ...
"""
import logging
import operator
from fractions import Fraction
from math import comb
from types import MappingProxyType
from typing import Dict, Iterator, List, Mapping, Optional, Sequence, Tuple, Union

from ..core.errors import (
    BeyondTruncation,
    CompositionError,
    IndexOutOfRange,
    InvalidOrder,
    NotInvertible,
    SeriesError,
    VariableCountMismatch,
)

logger = logging.getLogger(__name__)

MultiIndex = Tuple[int, ...]
Scalar = Union[Fraction, int]


def grlex_key(k: MultiIndex) -> Tuple[int, Tuple[int, ...]]:
    return sum(k), tuple(-e for e in k)


def _compositions(total: int, parts: int) -> Iterator[MultiIndex]:
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def multi_indices(n: int, order: int) -> Iterator[MultiIndex]:
    """All k with |k| <= order in n variables, graded-lex order"""
    for degree in range(order + 1):
        yield from _compositions(degree, n)


def multi_index_count(n: int, order: int) -> int:
    return comb(order + n, n)


def format_rational(c: Fraction) -> str:
    return str(Fraction(c))


class Series:
    """Immutable truncated power series in ``n`` variables up to total degree ``order``"""

    __slots__ = ("_n", "_order", "_terms", "_layers")

    def __init__(self, n: int, order: int, terms: Optional[Mapping[Sequence[int], Scalar]] = None):
        if n < 1:
            raise IndexOutOfRange(f"variable count must be >= 1, got {n}")
        if order < 0:
            raise InvalidOrder(f"truncation order must be >= 0, got {order}")
        clean: Dict[MultiIndex, Fraction] = {}
        for raw, value in (terms or {}).items():
            k = tuple(int(e) for e in raw)
            if len(k) != n:
                raise VariableCountMismatch(f"multi-index {k} has length {len(k)}, expected {n}")
            if any(e < 0 for e in k):
                raise SeriesError(f"negative exponent in {k}")
            if sum(k) > order:
                continue
            c = Fraction(value)
            if c:
                clean[k] = clean.get(k, Fraction(0)) + c
        self._n = n
        self._order = order
        self._terms = {k: c for k, c in clean.items() if c}
        self._layers: Optional[List[List[Tuple[MultiIndex, Fraction]]]] = None

    @classmethod
    def _wrap(cls, n: int, order: int, terms: Dict[MultiIndex, Fraction]) -> "Series":
        # Trusted constructor: keys are valid, degrees <= order. Zeros are dropped here.
        obj = cls.__new__(cls)
        obj._n = n
        obj._order = order
        obj._terms = {k: c for k, c in terms.items() if c}
        obj._layers = None
        return obj

    @property
    def n(self) -> int:
        return self._n

    @property
    def order(self) -> int:
        return self._order

    @property
    def terms(self) -> Mapping[MultiIndex, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def constant(self) -> Fraction:
        return self._terms.get((0,) * self._n, Fraction(0))

    def items(self) -> List[Tuple[MultiIndex, Fraction]]:
        return sorted(self._terms.items(), key=lambda item: grlex_key(item[0]))

    def layers(self) -> List[List[Tuple[MultiIndex, Fraction]]]:
        """Terms grouped by total degree (index = degree)"""
        if self._layers is None:
            layers: List[List[Tuple[MultiIndex, Fraction]]] = [[] for _ in range(self._order + 1)]
            for k, c in self.items():
                layers[sum(k)].append((k, c))
            self._layers = layers
        return self._layers

    def __len__(self) -> int:
        return len(self._terms)

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = make_constant(other, self._n, self._order)
        if not isinstance(other, Series):
            return NotImplemented
        if self._n != other._n:
            return False
        common = min(self._order, other._order)
        return truncate(self, common)._terms == truncate(other, common)._terms

    __hash__ = None  # equality depends on the truncation order of both operands

    def __repr__(self) -> str:
        return f"Series(n={self._n}, order={self._order}, '{to_text(self)}')"

    def __str__(self) -> str:
        return to_text(self)

    def __neg__(self) -> "Series":
        return neg(self)

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = make_constant(other, self._n, self._order)
        if not isinstance(other, Series):
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = make_constant(other, self._n, self._order)
        if not isinstance(other, Series):
            return NotImplemented
        return sub(self, other)

    def __rsub__(self, other):
        if isinstance(other, (int, Fraction)):
            return sub(make_constant(other, self._n, self._order), self)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return scale(self, other)
        if not isinstance(other, Series):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if other == 0:
                raise ZeroDivisionError("division of a series by zero")
            return scale(self, 1 / Fraction(other))
        if not isinstance(other, Series):
            return NotImplemented
        return mul(self, reciprocal(other))

    def __pow__(self, exponent: int) -> "Series":
        return power(self, exponent)


# Construction

def make_constant(c: Scalar, n: int, order: int) -> Series:
    return Series(n, order, {(0,) * n: c})


def zero_series(n: int, order: int) -> Series:
    return Series(n, order)


def make_variable(i: int, n: int, order: int) -> Series:
    """The series x_i (1-based index)"""
    if not 1 <= i <= n:
        raise IndexOutOfRange(f"variable index {i} out of range 1..{n}")
    if order < 1:
        raise InvalidOrder("x_i is not representable at order 0")
    k = tuple(1 if j == i - 1 else 0 for j in range(n))
    return Series(n, order, {k: 1})


def from_terms(terms: Mapping[Sequence[int], Scalar], n: int, order: int) -> Series:
    return Series(n, order, terms)


# Ring operations

def _check_same_n(a: Series, b: Series) -> None:
    if a.n != b.n:
        raise VariableCountMismatch(f"variable count mismatch: {a.n} vs {b.n}")


def add(a: Series, b: Series) -> Series:
    _check_same_n(a, b)
    order = min(a.order, b.order)
    acc: Dict[MultiIndex, Fraction] = {}
    for source in (a, b):
        for k, c in source._terms.items():
            if sum(k) <= order:
                acc[k] = acc.get(k, 0) + c
    return Series._wrap(a.n, order, acc)


def neg(a: Series) -> Series:
    return Series._wrap(a.n, a.order, {k: -c for k, c in a._terms.items()})


def sub(a: Series, b: Series) -> Series:
    return add(a, neg(b))


def scale(a: Series, c: Scalar) -> Series:
    c = Fraction(c)
    if not c:
        return Series._wrap(a.n, a.order, {})
    return Series._wrap(a.n, a.order, {k: v * c for k, v in a._terms.items()})


def mul(a: Series, b: Series, box: Optional[MultiIndex] = None) -> Series:
    """Truncated Cauchy product

    With ``box`` set, product terms whose exponents exceed the box in some
    variable are dropped (reduction modulo the ideal (x_i^(box_i + 1)));
    coefficients inside the box are unaffected.
    """
    _check_same_n(a, b)
    order = min(a.order, b.order)
    add_exp = operator.add
    b_layers = b.layers()
    acc: Dict[MultiIndex, Fraction] = {}
    for ka, ca in a._terms.items():
        da = sum(ka)
        if da > order:
            continue
        for d in range(min(order - da, b.order) + 1):
            for kb, cb in b_layers[d]:
                k = tuple(map(add_exp, ka, kb))
                if box is not None and any(map(operator.gt, k, box)):
                    continue
                acc[k] = acc.get(k, 0) + ca * cb
    return Series._wrap(a.n, order, acc)


def mul_variable(a: Series, i: int) -> Series:
    """x_i * a, known one degree further than a"""
    if not 1 <= i <= a.n:
        raise IndexOutOfRange(f"variable index {i} out of range 1..{a.n}")
    shifted = {}
    for k, c in a._terms.items():
        exps = list(k)
        exps[i - 1] += 1
        shifted[tuple(exps)] = c
    return Series._wrap(a.n, a.order + 1, shifted)


def power(a: Series, exponent: int, box: Optional[MultiIndex] = None) -> Series:
    if exponent < 0:
        raise SeriesError(f"exponent must be non-negative, got {exponent}")
    result = make_constant(1, a.n, a.order)
    base = a if box is None else box_truncate(a, box)
    while exponent:
        if exponent & 1:
            result = mul(result, base, box)
        exponent >>= 1
        if exponent:
            base = mul(base, base, box)
    return result


# Coefficients and truncation

def coefficient(a: Series, k: Sequence[int]) -> Fraction:
    """[x^k] a; raises BeyondTruncation when |k| exceeds the order"""
    k = tuple(k)
    if len(k) != a.n:
        raise VariableCountMismatch(f"multi-index {k} has length {len(k)}, expected {a.n}")
    if any(e < 0 for e in k):
        raise SeriesError(f"negative exponent in {k}")
    if sum(k) > a.order:
        raise BeyondTruncation(f"|k| = {sum(k)} is beyond truncation order {a.order}")
    return a._terms.get(k, Fraction(0))


def truncate(a: Series, order: int) -> Series:
    if order > a.order:
        raise InvalidOrder(f"cannot truncate order {a.order} series to higher order {order}")
    if order < 0:
        raise InvalidOrder(f"truncation order must be >= 0, got {order}")
    if order == a.order:
        return a
    return Series._wrap(a.n, order, {k: c for k, c in a._terms.items() if sum(k) <= order})


def box_truncate(a: Series, box: Sequence[int]) -> Series:
    """Keep only terms with k <= box componentwise"""
    box = tuple(box)
    return Series._wrap(
        a.n, a.order, {k: c for k, c in a._terms.items() if all(map(operator.le, k, box))}
    )


def valuation(a: Series) -> Optional[int]:
    if not a._terms:
        return None
    return min(sum(k) for k in a._terms)


# Calculus

def partial_derivative(a: Series, j: int) -> Series:
    """Term-wise d/dx_j; the result is known to order a.order - 1"""
    if not 1 <= j <= a.n:
        raise IndexOutOfRange(f"derivative index {j} out of range 1..{a.n}")
    if a.order < 1:
        raise InvalidOrder("derivative of an order-0 series carries no information")
    idx = j - 1
    acc: Dict[MultiIndex, Fraction] = {}
    for k, c in a._terms.items():
        e = k[idx]
        if e:
            acc[k[:idx] + (e - 1,) + k[idx + 1:]] = c * e
    return Series._wrap(a.n, a.order - 1, acc)


def compose_many(outers: Sequence[Series], inner: Sequence[Series]) -> List[Series]:
    """Substitute the same inner tuple into several outer series

    Monomials inner^k are built incrementally from shared prefixes and
    reused across all outers.
    """
    inner = list(inner)
    if not inner:
        raise CompositionError("composition needs at least one inner series")
    n, order = inner[0].n, inner[0].order
    for s in inner:
        if s.n != n or s.order != order:
            raise CompositionError("inner series must share variable count and order")
        if s.constant:
            raise CompositionError("inner series must have zero constant term")
    m = len(inner)
    cache: Dict[MultiIndex, Series] = {(0,) * m: make_constant(1, n, order)}

    def monomial(k: MultiIndex) -> Series:
        cached = cache.get(k)
        if cached is not None:
            return cached
        i = next(idx for idx, e in enumerate(k) if e)
        prev = k[:i] + (k[i] - 1,) + k[i + 1:]
        value = mul(monomial(prev), inner[i])
        cache[k] = value
        return value

    results = []
    for outer in outers:
        if outer.n != m:
            raise CompositionError(f"arity mismatch: outer has {outer.n} variables, {m} inner series given")
        result_order = min(outer.order, order)
        acc: Dict[MultiIndex, Fraction] = {}
        for k, c in outer.items():
            if sum(k) > result_order:
                break
            for kk, cc in monomial(k)._terms.items():
                if sum(kk) <= result_order:
                    acc[kk] = acc.get(kk, 0) + c * cc
        results.append(Series._wrap(n, result_order, acc))
    return results


def compose(outer: Series, inner: Sequence[Series]) -> Series:
    return compose_many([outer], inner)[0]


def reciprocal(a: Series) -> Series:
    """1/a by graded convolution; requires a nonzero constant term"""
    a0 = a.constant
    if not a0:
        raise NotInvertible("zero constant term: not invertible in the power-series ring")
    inv0 = 1 / a0
    a_layers = a.layers()
    zero_k = (0,) * a.n
    b_layers: List[List[Tuple[MultiIndex, Fraction]]] = [[(zero_k, inv0)]]
    for d in range(1, a.order + 1):
        acc: Dict[MultiIndex, Fraction] = {}
        for j in range(1, d + 1):
            for ka, ca in a_layers[j]:
                for kb, cb in b_layers[d - j]:
                    k = tuple(map(operator.add, ka, kb))
                    acc[k] = acc.get(k, 0) + ca * cb
        b_layers.append([(k, -inv0 * c) for k, c in acc.items() if c])
    terms = {k: c for layer in b_layers for k, c in layer}
    return Series._wrap(a.n, a.order, terms)


# Float evaluation and text form

def evaluate(a: Series, x: Sequence[float]) -> float:
    """Float value of the truncated series at x, summed in graded-lex order"""
    if len(x) != a.n:
        raise VariableCountMismatch(f"point has {len(x)} coordinates, expected {a.n}")
    total = 0.0
    for k, c in a.items():
        term = float(c)
        for xi, e in zip(x, k):
            if e:
                term *= float(xi) ** e
        total += term
    return total


def default_names(n: int) -> List[str]:
    return [f"x{i}" for i in range(1, n + 1)]


def _monomial_text(k: MultiIndex, names: Sequence[str]) -> str:
    factors = []
    for name, e in zip(names, k):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return "*".join(factors)


def to_text(a: Series, names: Optional[Sequence[str]] = None) -> str:
    """Canonical text form, readable back by the expression parser"""
    names = list(names) if names else default_names(a.n)
    pieces: List[str] = []
    for k, c in a.items():
        mono = _monomial_text(k, names)
        magnitude = abs(c)
        if not mono:
            body = format_rational(magnitude)
        elif magnitude == 1:
            body = mono
        else:
            body = f"{format_rational(magnitude)}*{mono}"
        if not pieces:
            pieces.append(f"-{body}" if c < 0 else body)
        else:
            pieces.append(f" - {body}" if c < 0 else f" + {body}")
    return "".join(pieces) if pieces else "0"


# Matrices

class SeriesMatrix:
    """Square matrix of series sharing (n, order); ``dim`` is the matrix size"""

    __slots__ = ("_rows",)

    def __init__(self, rows: Sequence[Sequence[Series]]):
        rows = tuple(tuple(row) for row in rows)
        if not rows or any(len(row) != len(rows) for row in rows):
            raise SeriesError("series matrix must be square and non-empty")
        first = rows[0][0]
        for row in rows:
            for entry in row:
                if entry.n != first.n:
                    raise VariableCountMismatch("matrix entries must share the variable count")
                if entry.order != first.order:
                    raise InvalidOrder("matrix entries must share the truncation order")
        self._rows = rows

    @property
    def dim(self) -> int:
        return len(self._rows)

    @property
    def n(self) -> int:
        return self._rows[0][0].n

    @property
    def order(self) -> int:
        return self._rows[0][0].order

    def entry(self, i: int, j: int) -> Series:
        """1-based entry access"""
        return self._rows[i - 1][j - 1]

    def rows(self) -> Tuple[Tuple[Series, ...], ...]:
        return self._rows

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return self._rows == other._rows

    __hash__ = None

    def __repr__(self) -> str:
        body = "; ".join(", ".join(to_text(e) for e in row) for row in self._rows)
        return f"SeriesMatrix([{body}])"


def identity_matrix(dim: int, n: int, order: int) -> SeriesMatrix:
    return SeriesMatrix(
        [[make_constant(1 if i == j else 0, n, order) for j in range(dim)] for i in range(dim)]
    )


def _cofactor_expansion(rows: Sequence[Sequence[Series]]) -> Series:
    if len(rows) == 1:
        return rows[0][0]
    first = rows[0][0]
    total = zero_series(first.n, first.order)
    for j, entry in enumerate(rows[0]):
        if not entry:
            continue
        minor = [row[:j] + row[j + 1:] for row in rows[1:]]
        term = mul(entry, _cofactor_expansion(minor))
        total = add(total, term) if j % 2 == 0 else sub(total, term)
    return total


def determinant(matrix: SeriesMatrix) -> Series:
    """Exact determinant by cofactor expansion along the first row"""
    return _cofactor_expansion(matrix.rows())
