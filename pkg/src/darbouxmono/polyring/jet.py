"""Truncated multivariate power series (jets) of a fixed total order."""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational

from ..errors import NotAUnit, RosterMismatch
from .polynomial import Polynomial, as_fraction

__all__ = ["Jet", "DEFAULT_ORDER"]

DEFAULT_ORDER = 8


def _mul_truncated(a: dict, b: dict, order: int) -> dict:
    if not a or not b:
        return {}
    bd = sorted(((sum(e), e, c) for e, c in b.items()), key=lambda t: t[0])
    out: dict = {}
    for ea, ca in a.items():
        room = order - sum(ea)
        if room < 0:
            continue
        for d, eb, cb in bd:
            if d > room:
                break
            k = tuple(x + y for x, y in zip(ea, eb))
            out[k] = out.get(k, 0) + ca * cb
    return {k: c for k, c in out.items() if c}


class Jet:
    """A power series known modulo terms of total degree ``order + 1``.

    Two jets compare equal only if their orders and truncated bodies agree.
    """

    __slots__ = ("order", "poly")

    def __init__(self, poly: Polynomial, order: int = DEFAULT_ORDER):
        if order < 0:
            raise ValueError("jet order must be non-negative")
        self.order = int(order)
        self.poly = poly.truncate(self.order)

    @classmethod
    def constant(cls, variables, value, order=DEFAULT_ORDER):
        return cls(Polynomial.constant(variables, value), order)

    @classmethod
    def one(cls, variables, order=DEFAULT_ORDER):
        return cls.constant(variables, 1, order)

    @classmethod
    def var(cls, variables, name, order=DEFAULT_ORDER):
        return cls(Polynomial.var(variables, name), order)

    @property
    def variables(self):
        return self.poly.variables

    def constant_term(self) -> Fraction:
        return self.poly.constant_term()

    def truncate(self, order: int) -> "Jet":
        if order > self.order:
            raise ValueError("cannot raise the order of a jet")
        return Jet(self.poly, order)

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    # -- ring operations --------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Jet):
            if other.variables != self.variables:
                raise RosterMismatch("jets over different rosters")
            if other.order != self.order:
                raise ValueError(f"jet orders differ: {self.order} vs {other.order}")
            return other
        if isinstance(other, Polynomial):
            return Jet(other, self.order)
        if isinstance(other, (int, Fraction, Rational)):
            return Jet.constant(self.variables, other, self.order)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet(self.poly + other.poly, self.order)

    __radd__ = __add__

    def __neg__(self):
        return Jet(-self.poly, self.order)

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Jet(self.poly - other.poly, self.order)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Rational)) and not isinstance(other, bool):
            return Jet(self.poly * other, self.order)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = _mul_truncated(self.poly._terms, other.poly._terms, self.order)
        return Jet(Polynomial._raw(self.variables, terms), self.order)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, Rational)):
            return self * (1 / as_fraction(other))
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.invert()

    def __pow__(self, k):
        if isinstance(k, int) and k >= 0:
            result = Jet.one(self.variables, self.order)
            base = self
            while k:
                if k & 1:
                    result = result * base
                k >>= 1
                if k:
                    base = base * base
            return result
        if isinstance(k, int):
            return self.invert() ** (-k)
        return self.pow_rational(k)

    def __eq__(self, other):
        if isinstance(other, Jet):
            return self.order == other.order and self.poly == other.poly
        if isinstance(other, Polynomial):
            return self.poly == other.truncate(self.order)
        if isinstance(other, (int, Fraction, Rational)):
            return self.poly == other
        return NotImplemented

    def __hash__(self):
        return hash((self.order, self.poly))

    def __str__(self):
        return f"{self.poly} + O({self.order + 1})"

    def __repr__(self):
        return f"Jet({str(self.poly)!r}, order={self.order}, variables={self.variables})"

    # -- series -----------------------------------------------------------
    def _series(self, coeffs) -> "Jet":
        """Evaluate ``sum coeffs[k] * w**k`` where ``w`` is self minus its constant."""
        w = self - self.constant_term()
        result = Jet.constant(self.variables, coeffs[self.order], self.order)
        for k in range(self.order - 1, -1, -1):
            result = result * w + coeffs[k]
        return result

    def _require_one(self, what):
        c = self.constant_term()
        if c != 1:
            raise NotAUnit(f"{what} needs constant term 1, got {c}")

    def invert(self) -> "Jet":
        c = self.constant_term()
        if not c:
            raise NotAUnit("cannot invert a jet with zero constant term")
        u = self * (1 / c)
        # 1/(1+w) = sum (-w)^k
        inv = u._series([Fraction((-1) ** k) for k in range(self.order + 1)])
        return inv * (1 / c)

    def exp(self) -> "Jet":
        if self.constant_term():
            raise NotAUnit("exp needs a jet with zero constant term")
        coeffs, f = [], Fraction(1)
        for k in range(self.order + 1):
            if k:
                f /= k
            coeffs.append(f)
        return (self + 1)._series(coeffs)

    def log(self) -> "Jet":
        self._require_one("log")
        coeffs = [Fraction(0)] + [Fraction((-1) ** (k + 1), k) for k in range(1, self.order + 1)]
        return self._series(coeffs)

    def pow_rational(self, exponent) -> "Jet":
        """``self ** exponent`` via the binomial series; constant term must be 1."""
        p = as_fraction(exponent)
        self._require_one("pow_rational")
        coeffs, b = [], Fraction(1)
        for k in range(self.order + 1):
            if k:
                b = b * (p - (k - 1)) / k
            coeffs.append(b)
        return self._series(coeffs)

    # -- differential operators ------------------------------------------
    def euler(self, name: str) -> "Jet":
        """``z * d/dz`` for ``z = name``; degree preserving, so exact to this order."""
        return Jet(self.poly.euler(name), self.order)

    def derivative(self, name: str) -> "Jet":
        """Partial derivative; the result is only meaningful to ``order - 1``."""
        return Jet(self.poly.derivative(name), self.order - 1)
