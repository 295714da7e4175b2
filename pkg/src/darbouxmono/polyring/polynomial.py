"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial lives over an ordered tuple of variable names (its *roster*).
Terms are stored as ``{exponent tuple: Fraction}`` with zero coefficients
never stored. Values are immutable; every operation returns a new object.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational
from types import MappingProxyType
from typing import Iterable, Mapping, Sequence

from ..errors import RosterMismatch, UnknownVariable

__all__ = ["Polynomial", "as_fraction", "grlex_key"]


def as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


def grlex_key(exps: tuple) -> tuple:
    return (sum(exps), exps)


class Polynomial:
    __slots__ = ("_vars", "_terms", "_hash")

    def __init__(self, variables: Sequence[str], terms: Mapping[tuple, object] | None = None):
        self._vars = tuple(variables)
        if len(set(self._vars)) != len(self._vars):
            raise ValueError(f"duplicate variable names in {self._vars}")
        clean = {}
        n = len(self._vars)
        for exps, c in (terms or {}).items():
            exps = tuple(int(e) for e in exps)
            if len(exps) != n or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps} for roster {self._vars}")
            c = as_fraction(c)
            if c:
                clean[exps] = clean.get(exps, 0) + c
                if not clean[exps]:
                    del clean[exps]
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, variables: tuple, terms: dict) -> "Polynomial":
        # trusted constructor: terms already clean
        p = object.__new__(cls)
        p._vars = variables
        p._terms = terms
        p._hash = None
        return p

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, variables):
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, variables, value):
        variables = tuple(variables)
        c = as_fraction(value)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def var(cls, variables, name):
        variables = tuple(variables)
        if name not in variables:
            raise UnknownVariable(f"{name!r} not in roster {variables}")
        exps = tuple(1 if v == name else 0 for v in variables)
        return cls._raw(variables, {exps: Fraction(1)})

    @classmethod
    def monomial(cls, variables, exps, coeff=1):
        variables = tuple(variables)
        return cls(variables, {tuple(exps): coeff})

    # -- accessors --------------------------------------------------------
    @property
    def variables(self) -> tuple:
        return self._vars

    @property
    def terms(self) -> Mapping[tuple, Fraction]:
        return MappingProxyType(self._terms)

    def sorted_terms(self) -> list:
        """Terms in graded lexicographic order, leading term first."""
        return sorted(self._terms.items(), key=lambda t: grlex_key(t[0]), reverse=True)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def is_monomial(self) -> bool:
        return len(self._terms) == 1

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * len(self._vars), Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def min_degree(self) -> int:
        return min((sum(e) for e in self._terms), default=-1)

    def degree_in(self, name: str) -> int:
        i = self._index(name)
        return max((e[i] for e in self._terms), default=-1)

    def used_variables(self) -> tuple:
        n = len(self._vars)
        return tuple(self._vars[i] for i in range(n) if any(e[i] for e in self._terms))

    def _index(self, name):
        try:
            return self._vars.index(name)
        except ValueError:
            raise UnknownVariable(f"{name!r} not in roster {self._vars}") from None

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Polynomial):
            if other._vars != self._vars:
                raise RosterMismatch(f"rosters differ: {self._vars} vs {other._vars}")
            return other
        if isinstance(other, (int, Fraction, Rational)):
            return Polynomial.constant(self._vars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Polynomial._raw(self._vars, out)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self._vars, {k: -c for k, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Rational)) and not isinstance(other, bool):
            c = as_fraction(other)
            if not c:
                return Polynomial.zero(self._vars)
            return Polynomial._raw(self._vars, {k: v * c for k, v in self._terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for ka, ca in self._terms.items():
            for kb, cb in other._terms.items():
                k = tuple(x + y for x, y in zip(ka, kb))
                out[k] = out.get(k, 0) + ca * cb
        return Polynomial._raw(self._vars, {k: c for k, c in out.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        c = as_fraction(other)
        if not c:
            raise ZeroDivisionError("division of a polynomial by zero")
        return self * (1 / c)

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.constant(self._vars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self._vars == other._vars and self._terms == other._terms
        if isinstance(other, (int, Fraction, Rational)):
            return self.is_constant() and self.constant_term() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._vars, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    # -- calculus and substitution ---------------------------------------
    def derivative(self, name: str) -> "Polynomial":
        i = self._index(name)
        out = {}
        for e, c in self._terms.items():
            if e[i]:
                k = e[:i] + (e[i] - 1,) + e[i + 1:]
                out[k] = c * e[i]
        return Polynomial._raw(self._vars, out)

    def euler(self, name: str) -> "Polynomial":
        """Apply ``z * d/dz`` for the variable ``z = name``."""
        i = self._index(name)
        return Polynomial._raw(
            self._vars, {e: c * e[i] for e, c in self._terms.items() if e[i]}
        )

    def substitute(self, bindings: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Replace every roster variable by a polynomial.

        ``bindings`` must cover the whole roster and all targets must share
        one roster, which becomes the roster of the result.
        """
        missing = [v for v in self._vars if v not in bindings]
        if missing:
            raise RosterMismatch(f"bindings do not cover {missing}")
        extra = [v for v in bindings if v not in self._vars]
        if extra:
            raise RosterMismatch(f"bindings mention unknown variables {extra}")
        images = [bindings[v] for v in self._vars]
        target = None
        for img in images:
            if not isinstance(img, Polynomial):
                raise TypeError("binding targets must be Polynomials")
            if target is None:
                target = img._vars
            elif img._vars != target:
                raise RosterMismatch("binding targets have different rosters")
        if target is None:  # empty roster: constant polynomial
            return Polynomial.constant((), self.constant_term())
        cache: list[dict] = [{0: Polynomial.constant(target, 1)} for _ in images]

        def power(i, k):
            table = cache[i]
            if k not in table:
                table[k] = power(i, k - 1) * images[i]
            return table[k]

        result = Polynomial.zero(target)
        for e, c in self._terms.items():
            term = Polynomial.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            result = result + term
        return result

    def evaluate(self, point: Mapping[str, object]) -> Fraction:
        vals = [as_fraction(point[v]) for v in self._vars]
        total = Fraction(0)
        for e, c in self._terms.items():
            t = c
            for x, k in zip(vals, e):
                if k:
                    t *= x ** k
            total += t
        return total

    def translate(self, point: Mapping[str, object]) -> "Polynomial":
        """Re-centre at ``point``: returns ``p(z + point)``."""
        bindings = {
            v: Polynomial.var(self._vars, v) + as_fraction(point.get(v, 0)) for v in self._vars
        }
        return self.substitute(bindings)

    def with_roster(self, variables: Sequence[str]) -> "Polynomial":
        """Re-express over a roster containing every variable actually used."""
        variables = tuple(variables)
        used = self.used_variables()
        for v in used:
            if v not in variables:
                raise RosterMismatch(f"variable {v!r} missing from target roster {variables}")
        idx = [self._vars.index(v) if v in self._vars else None for v in variables]
        out = {}
        for e, c in self._terms.items():
            out[tuple(e[i] if i is not None else 0 for i in idx)] = c
        return Polynomial._raw(variables, out)

    def monomial_content(self) -> tuple[tuple, "Polynomial"]:
        """Split ``p = z**beta * q`` with ``beta`` the componentwise minimum exponent."""
        if not self._terms:
            raise ValueError("the zero polynomial has no monomial content")
        n = len(self._vars)
        exps = list(self._terms)
        beta = tuple(min(e[i] for e in exps) for i in range(n))
        q = {tuple(a - b for a, b in zip(e, beta)): c for e, c in self._terms.items()}
        return beta, Polynomial._raw(self._vars, q)

    def truncate(self, order: int) -> "Polynomial":
        return Polynomial._raw(
            self._vars, {e: c for e, c in self._terms.items() if sum(e) <= order}
        )

    def content(self) -> Fraction:
        """Positive rational ``c`` such that ``self / c`` has coprime integer coefficients."""
        from math import gcd, lcm

        if not self._terms:
            return Fraction(0)
        den = lcm(*(c.denominator for c in self._terms.values()))
        num = gcd(*(c.numerator * (den // c.denominator) for c in self._terms.values()))
        return Fraction(num, den)

    # -- printing ---------------------------------------------------------
    def __str__(self):
        if not self._terms:
            return "0"
        pieces = []
        for i, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                v if k == 1 else f"{v}^{k}" for v, k in zip(self._vars, e) if k
            )
            mag = abs(c)
            if not mono:
                body = str(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{mag}*{mono}"
            if i == 0:
                pieces.append(("-" if c < 0 else "") + body)
            else:
                pieces.append((" - " if c < 0 else " + ") + body)
        return "".join(pieces)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, variables={self._vars})"

