"""Exact polynomials over the rationals and truncated power-series jets."""
from __future__ import annotations

from ..errors import RosterMismatch
from .jet import DEFAULT_ORDER, Jet
from .parser import parse_polynomial
from .polynomial import Polynomial, as_fraction

__all__ = [
    "DEFAULT_ORDER",
    "Jet",
    "Polynomial",
    "as_fraction",
    "parse_polynomial",
    "poly_arith",
    "poly_pow",
    "partial_derivative",
    "substitute",
    "monomial_content",
]


def poly_arith(a: Polynomial, b: Polynomial, op: str) -> Polynomial:
    if a.variables != b.variables:
        raise RosterMismatch(f"rosters differ: {a.variables} vs {b.variables}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown operation {op!r}")


def poly_pow(a: Polynomial, k: int) -> Polynomial:
    return a ** k


def partial_derivative(p: Polynomial, var: str) -> Polynomial:
    return p.derivative(var)


def substitute(p: Polynomial, bindings) -> Polynomial:
    return p.substitute(bindings)


def monomial_content(p: Polynomial):
    return p.monomial_content()
