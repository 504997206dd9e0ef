"""Recursive-descent parser for series expressions

Grammar:
    expr     := term (("+" | "-") term)*
    term     := unary (("*" | "/") unary)*
    unary    := ("-" | "+") unary | factor
    factor   := base ("^" nat)?      (exponent <= max_exponent)
    base     := rational | var | "(" expr ")" | "inv" "(" expr ")"
    rational := nat ("/" nat)?      (no p/q folding right after "/")
    var      := "x" nat | declared name
"""
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

from ..core.config import settings
from ..core.errors import (
    ExpressionSyntaxError,
    InvalidExponent,
    LoweringError,
    NotInvertible,
    UnknownVariable,
)
from ..models.series import Series, add, make_constant, mul, neg, power, reciprocal, scale, sub

Span = Tuple[int, int]

TOKEN_PATTERN = re.compile(r"\s*(?:(?P<number>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))")
INDEXED_VARIABLE = re.compile(r"x(\d+)")
RESERVED_NAMES = {"inv"}


@dataclass(frozen=True)
class Token:
    kind: str  # number | name | op | end
    text: str
    start: int
    end: int


# AST

@dataclass(frozen=True)
class RationalLiteral:
    value: Fraction
    span: Span


@dataclass(frozen=True)
class VariableRef:
    index: int  # 1-based
    name: str
    span: Span


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: "ExpressionAST"
    right: "ExpressionAST"
    span: Span


@dataclass(frozen=True)
class Negate:
    operand: "ExpressionAST"
    span: Span


@dataclass(frozen=True)
class PowerOp:
    base: "ExpressionAST"
    exponent: int
    span: Span


@dataclass(frozen=True)
class Group:
    inner: "ExpressionAST"
    span: Span


@dataclass(frozen=True)
class Inverse:
    operand: "ExpressionAST"
    span: Span


ExpressionAST = Union[RationalLiteral, VariableRef, BinaryOp, Negate, PowerOp, Group, Inverse]


def tokenize(source: str) -> List[Token]:
    tokens = []
    position = 0
    stripped_end = len(source.rstrip())
    while position < stripped_end:
        match = TOKEN_PATTERN.match(source, position)
        if not match:
            offset = position + (len(source[position:]) - len(source[position:].lstrip()))
            raise ExpressionSyntaxError(f"unexpected character '{source[offset]}'", source, offset)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind), match.end(kind)))
        position = match.end()
    tokens.append(Token("end", "", len(source), len(source)))
    return tokens


class ExpressionParser:
    """Parse one expression over n variables (x1..xn or declared names)"""

    def __init__(self, source: str, n: int, names: Optional[Sequence[str]] = None):
        self.source = source
        self.n = n
        self.names: Dict[str, int] = {}
        for index, name in enumerate(names or [], start=1):
            self.names[name] = index
        self.tokens: List[Token] = []
        self.pos = 0

    def parse(self) -> ExpressionAST:
        if not self.source.strip():
            raise ExpressionSyntaxError("empty expression", self.source, 0)
        self.tokens = tokenize(self.source)
        self.pos = 0
        node = self._expr()
        token = self._peek()
        if token.kind != "end":
            raise self._error(f"unexpected '{token.text}'", token)
        return node

    # Token helpers

    def _peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def _advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def _is_op(self, token: Token, *ops: str) -> bool:
        return token.kind == "op" and token.text in ops

    def _expect_op(self, op: str) -> Token:
        token = self._peek()
        if not self._is_op(token, op):
            found = token.text or "end of input"
            raise self._error(f"expected '{op}', found '{found}'", token)
        return self._advance()

    def _error(self, message: str, token: Token) -> ExpressionSyntaxError:
        return ExpressionSyntaxError(message, self.source, token.start)

    # Grammar

    def _expr(self) -> ExpressionAST:
        node = self._term()
        while self._is_op(self._peek(), "+", "-"):
            op = self._advance().text
            right = self._term()
            node = BinaryOp(op, node, right, (node.span[0], right.span[1]))
        return node

    def _term(self) -> ExpressionAST:
        node = self._unary()
        while self._is_op(self._peek(), "*", "/"):
            op = self._advance().text
            right = self._unary(in_divisor=op == "/")
            node = BinaryOp(op, node, right, (node.span[0], right.span[1]))
        return node

    def _unary(self, in_divisor: bool = False) -> ExpressionAST:
        token = self._peek()
        if self._is_op(token, "-"):
            self._advance()
            operand = self._unary(in_divisor)
            return Negate(operand, (token.start, operand.span[1]))
        if self._is_op(token, "+"):
            self._advance()
            return self._unary(in_divisor)
        return self._factor(in_divisor)

    def _factor(self, in_divisor: bool = False) -> ExpressionAST:
        base = self._base(in_divisor)
        if self._is_op(self._peek(), "^"):
            self._advance()
            token = self._peek()
            if token.kind != "number":
                raise InvalidExponent(
                    "exponent must be a non-negative integer literal", self.source, token.start
                )
            if int(token.text) > settings.max_exponent:
                raise InvalidExponent(
                    f"exponent exceeds the limit of {settings.max_exponent}", self.source, token.start
                )
            self._advance()
            return PowerOp(base, int(token.text), (base.span[0], token.end))
        return base

    def _base(self, in_divisor: bool = False) -> ExpressionAST:
        token = self._peek()
        if token.kind == "number":
            self._advance()
            value = Fraction(int(token.text))
            end = token.end
            # a divisor never absorbs the next division: x1/2/3 is (x1/2)/3
            if not in_divisor and self._is_op(self._peek(), "/") and self._peek(1).kind == "number":
                self._advance()
                denominator = self._advance()
                if int(denominator.text) == 0:
                    raise self._error("zero denominator in rational literal", denominator)
                value = Fraction(int(token.text), int(denominator.text))
                end = denominator.end
            return RationalLiteral(value, (token.start, end))
        if token.kind == "name":
            if token.text == "inv" and self._is_op(self._peek(1), "("):
                self._advance()
                self._advance()
                inner = self._expr()
                closing = self._expect_op(")")
                return Inverse(inner, (token.start, closing.end))
            self._advance()
            return VariableRef(self._resolve(token), token.text, (token.start, token.end))
        if self._is_op(token, "("):
            self._advance()
            inner = self._expr()
            closing = self._expect_op(")")
            return Group(inner, (token.start, closing.end))
        found = token.text or "end of input"
        raise self._error(f"unexpected '{found}'", token)

    def _resolve(self, token: Token) -> int:
        if token.text in self.names:
            return self.names[token.text]
        match = INDEXED_VARIABLE.fullmatch(token.text)
        if match and token.text not in RESERVED_NAMES:
            index = int(match.group(1))
            if 1 <= index <= self.n:
                return index
        raise UnknownVariable(f"unknown variable '{token.text}'", self.source, token.start)


def parse_expression(source: str, n: int, names: Optional[Sequence[str]] = None) -> ExpressionAST:
    return ExpressionParser(source, n, names).parse()


def _literal_value(node: ExpressionAST) -> Optional[Fraction]:
    if isinstance(node, RationalLiteral):
        return node.value
    if isinstance(node, Group):
        return _literal_value(node.inner)
    if isinstance(node, Negate):
        inner = _literal_value(node.operand)
        return None if inner is None else -inner
    return None


def lower(node: ExpressionAST, n: int, order: int, source: Optional[str] = None) -> Series:
    """Evaluate an AST to an exact Series at the given order"""
    if isinstance(node, RationalLiteral):
        return make_constant(node.value, n, order)
    if isinstance(node, VariableRef):
        exps = tuple(1 if j == node.index - 1 else 0 for j in range(n))
        return Series(n, order, {exps: 1})
    if isinstance(node, Group):
        return lower(node.inner, n, order, source)
    if isinstance(node, Negate):
        return neg(lower(node.operand, n, order, source))
    if isinstance(node, PowerOp):
        return power(lower(node.base, n, order, source), node.exponent)
    if isinstance(node, Inverse):
        return _reciprocal_at(lower(node.operand, n, order, source), node.operand.span, source)
    if isinstance(node, BinaryOp):
        left = lower(node.left, n, order, source)
        if node.op == "/":
            divisor = _literal_value(node.right)
            if divisor is not None:
                if divisor == 0:
                    raise LoweringError("division by zero", node.right.span, source)
                return scale(left, 1 / divisor)
            right = lower(node.right, n, order, source)
            return mul(left, _reciprocal_at(right, node.right.span, source))
        right = lower(node.right, n, order, source)
        if node.op == "+":
            return add(left, right)
        if node.op == "-":
            return sub(left, right)
        return mul(left, right)
    raise TypeError(f"unknown AST node {node!r}")


def _reciprocal_at(series: Series, span: Span, source: Optional[str]) -> Series:
    try:
        return reciprocal(series)
    except NotInvertible as e:
        raise LoweringError(str(e), span, source) from e


def parse_series(source: str, n: int, order: int, names: Optional[Sequence[str]] = None) -> Series:
    return lower(parse_expression(source, n, names), n, order, source)
