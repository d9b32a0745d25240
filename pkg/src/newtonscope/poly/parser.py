"""Text form of polynomials.

Grammar (whitespace insignificant, no implicit multiplication)::

    expr   := ('+'|'-')? term (('+'|'-') term)*
    term   := factor ('*' factor)*
    factor := base ('^' uint)?
    base   := ident | number | 'i' | '(' expr ')'
    number := decimal, optional exponent, optional imaginary suffix 'i'

``to_string`` prints coefficients with ``repr`` floats so that parsing the
printed text reproduces every coefficient bit for bit.
"""

from __future__ import annotations

import math
import re
import warnings
from dataclasses import dataclass
from typing import Sequence

from .types import Polynomial

# Coefficients that cancel below this magnitude during parsing are dropped.
CANCELLATION_TOLERANCE = 1e-14

_TOKEN = re.compile(
    r"(?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?i?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*^()])"
    r"|(?P<space>\s+)"
)


class PolynomialSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownVariableError(ValueError):
    def __init__(self, name: str, position: int, variables: Sequence[str]):
        super().__init__(
            f"unknown variable {name!r} at position {position}; declared: {', '.join(variables)}"
        )
        self.name = name
        self.position = position


class NegativeExponentError(ValueError):
    def __init__(self, position: int):
        super().__init__(f"negative exponent at position {position}")
        self.position = position


class CoefficientCancellationWarning(UserWarning):
    """Like terms combined to a coefficient below the cancellation tolerance."""


@dataclass(frozen=True)
class _Token:
    kind: str
    text: str
    position: int


def _tokenize(text: str) -> list[_Token]:
    tokens: list[_Token] = []
    pos = 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise PolynomialSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = match.lastgroup or ""
        if kind != "space":
            tokens.append(_Token(kind, match.group(), pos))
        pos = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, variables: tuple[str, ...]):
        self.tokens = _tokenize(text)
        self.variables = variables
        self.index = 0

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        token = self.tokens[self.index]
        self.index += 1
        return token

    def parse(self) -> Polynomial:
        value = self.expr()
        token = self.peek()
        if token.kind != "end":
            raise PolynomialSyntaxError(f"unexpected {token.text!r}", token.position)
        return value

    def expr(self) -> Polynomial:
        negate = False
        token = self.peek()
        if token.kind == "op" and token.text in "+-":
            negate = token.text == "-"
            self.advance()
        value = self.term()
        if negate:
            value = -value
        while True:
            token = self.peek()
            if token.kind == "op" and token.text in "+-":
                self.advance()
                rhs = self.term()
                value = value + rhs if token.text == "+" else value - rhs
            else:
                return value

    def term(self) -> Polynomial:
        value = self.factor()
        while self.peek().kind == "op" and self.peek().text == "*":
            self.advance()
            value = value * self.factor()
        return value

    def factor(self) -> Polynomial:
        base = self.base()
        token = self.peek()
        if not (token.kind == "op" and token.text == "^"):
            return base
        self.advance()
        exponent = self.advance()
        if exponent.kind == "op" and exponent.text == "-":
            raise NegativeExponentError(exponent.position)
        if exponent.kind != "number" or not exponent.text.isdigit():
            raise PolynomialSyntaxError("expected a nonnegative integer exponent", exponent.position)
        return base ** int(exponent.text)

    def base(self) -> Polynomial:
        token = self.advance()
        if token.kind == "number":
            if token.text.endswith("i"):
                return Polynomial.constant(complex(0.0, float(token.text[:-1])), self.variables)
            return Polynomial.constant(float(token.text), self.variables)
        if token.kind == "ident":
            if token.text == "i":
                return Polynomial.constant(1j, self.variables)
            if token.text not in self.variables:
                raise UnknownVariableError(token.text, token.position, self.variables)
            return Polynomial.variable(token.text, self.variables)
        if token.kind == "op" and token.text == "(":
            value = self.expr()
            closing = self.advance()
            if not (closing.kind == "op" and closing.text == ")"):
                raise PolynomialSyntaxError("expected ')'", closing.position)
            return value
        if token.kind == "end":
            raise PolynomialSyntaxError("unexpected end of input", token.position)
        raise PolynomialSyntaxError(f"unexpected {token.text!r}", token.position)


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse ``text`` into an expanded polynomial over ``variables``."""
    names = tuple(variables)
    value = _Parser(text, names).parse()
    dropped = {
        alpha: c for alpha, c in value.terms.items() if abs(c) < CANCELLATION_TOLERANCE
    }
    if not dropped:
        return value
    warnings.warn(
        f"dropped {len(dropped)} near-zero coefficient(s) after combining like terms in {text!r}",
        CoefficientCancellationWarning,
        stacklevel=2,
    )
    kept = {alpha: c for alpha, c in value.terms.items() if alpha not in dropped}
    return Polynomial(names, kept)


def _format_real(x: float) -> str:
    return repr(float(x))


def format_coefficient(c: complex) -> str:
    if c.imag == 0:
        text = _format_real(c.real)
        return f"({text})" if text.startswith("-") else text
    sign = "-" if math.copysign(1.0, c.imag) < 0 else "+"
    return f"({_format_real(c.real)}{sign}{_format_real(abs(c.imag))}i)"


def _format_monomial(alpha: Sequence[int], variables: Sequence[str]) -> str:
    parts = []
    for name, power in zip(variables, alpha):
        if power == 1:
            parts.append(name)
        elif power > 1:
            parts.append(f"{name}^{power}")
    return "*".join(parts)


def to_string(f: Polynomial) -> str:
    """Print ``f`` in the grammar accepted by ``parse_polynomial``."""
    if f.is_zero():
        return "0"
    pieces = []
    for alpha, c in f.terms.items():
        monomial = _format_monomial(alpha, f.variables)
        coefficient = format_coefficient(c)
        pieces.append(f"{coefficient}*{monomial}" if monomial else coefficient)
    return " + ".join(pieces)
