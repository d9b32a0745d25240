"""Exact elimination of one variable from two equations.

Used as the symbolic reference for images of maps: the squarefree part of the
resultant defines the Zariski closure of the projection of a space curve.
"""

from __future__ import annotations

import sympy

from .types import PolySystem, Polynomial


def _to_sympy_number(c: complex) -> sympy.Expr:
    real = sympy.Rational(c.real)
    imag = sympy.Rational(c.imag)
    return real + sympy.I * imag if imag != 0 else real


def to_sympy(f: Polynomial, symbols: tuple[sympy.Symbol, ...]) -> sympy.Expr:
    expr = sympy.Integer(0)
    for alpha, c in f.terms.items():
        monomial = sympy.Integer(1)
        for sym, a in zip(symbols, alpha):
            if a:
                monomial *= sym**a
        expr += _to_sympy_number(c) * monomial
    return expr


def from_sympy(expr: sympy.Expr, symbols: tuple[sympy.Symbol, ...]) -> Polynomial:
    names = tuple(str(s) for s in symbols)
    poly = sympy.Poly(sympy.expand(expr), *symbols)
    terms = {tuple(int(e) for e in exps): complex(coeff) for exps, coeff in poly.terms()}
    return Polynomial(names, terms)


def eliminate(system: PolySystem, variable: str) -> Polynomial:
    """Squarefree resultant of a two-equation system with respect to ``variable``.

    The result lives over the remaining variables in their original order.
    """
    if len(system) != 2:
        raise ValueError(f"elimination needs exactly two equations, got {len(system)}")
    if variable not in system.variables:
        raise ValueError(f"unknown variable {variable!r}")
    symbols = tuple(sympy.Symbol(name) for name in system.variables)
    target = symbols[system.variables.index(variable)]
    f, g = (to_sympy(p, symbols) for p in system.polys)
    resultant = sympy.resultant(f, g, target)
    remaining = tuple(s for s in symbols if s != target)
    if resultant == 0:
        raise ValueError(f"equations share a factor in {variable!r}; resultant vanishes")
    reduced = sympy.sqf_part(sympy.Poly(resultant, *remaining))
    return from_sympy(reduced.as_expr(), remaining)
