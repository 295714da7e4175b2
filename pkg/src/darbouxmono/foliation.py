"""Darboux first integrals, their one-forms and the wedge system.

For ``H = prod P_i**a_i`` the one-form ``dH / phi`` with
``phi = prod P_i**(a_i - 1)`` has polynomial coefficients

    omega_v = sum_i a_i * dP_i/dv * prod_{j != i} P_j

which we build directly, never forming ``H`` and never dividing.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Mapping, Sequence

from .errors import RosterMismatch, VerificationSkipped
from .polyring import Polynomial, as_fraction, parse_polynomial

__all__ = [
    "DarbouxIntegral",
    "OneForm",
    "WedgeSystem",
    "darboux_one_form",
    "wedge_system",
    "verify_integrating_factor",
]


@dataclass(frozen=True)
class DarbouxIntegral:
    """``H = prod P_i**a_i`` over the roster ``(x, y, eps_1, ..., eps_n)``."""

    variables: tuple
    factors: tuple  # of (Polynomial, Fraction)

    def __post_init__(self):
        object.__setattr__(self, "variables", tuple(self.variables))
        object.__setattr__(
            self, "factors", tuple((p, as_fraction(a)) for p, a in self.factors)
        )
        if len(self.variables) < 2:
            raise ValueError("roster needs the two distinguished variables (x, y)")
        if not self.factors:
            raise ValueError("a Darboux integral needs at least one factor")
        for p, a in self.factors:
            if p.variables != self.variables:
                raise RosterMismatch(f"factor {p} is not over {self.variables}")
            if a <= 0:
                raise ValueError(f"exponent {a} must be positive")
            if p.is_zero():
                raise ValueError("zero factor")

    @classmethod
    def parse(cls, variables: Sequence[str], factors) -> "DarbouxIntegral":
        """Build from ``[(expression, exponent), ...]``; exponents may be ``"p/q"`` strings."""
        variables = tuple(variables)
        return cls(variables, [(parse_polynomial(t, variables), as_fraction(a)) for t, a in factors])

    @property
    def x(self):
        return self.variables[0]

    @property
    def y(self):
        return self.variables[1]

    @property
    def eps(self) -> tuple:
        return self.variables[2:]

    @property
    def n(self) -> int:
        return len(self.variables) - 2

    @property
    def k(self) -> int:
        return len(self.factors)

    @property
    def exponents(self) -> tuple:
        return tuple(a for _, a in self.factors)

    def has_integer_exponents(self) -> bool:
        return all(a.denominator == 1 for a in self.exponents)

    def expand(self) -> Polynomial:
        """``H`` itself; only defined for integer exponents."""
        if not self.has_integer_exponents():
            raise VerificationSkipped("H is not a polynomial for non-integer exponents")
        h = Polynomial.constant(self.variables, 1)
        for p, a in self.factors:
            h = h * p ** int(a)
        return h


@dataclass(frozen=True)
class OneForm:
    variables: tuple
    coefficients: Mapping[str, Polynomial]

    def coefficient(self, var: str) -> Polynomial:
        return self.coefficients.get(var, Polynomial.zero(self.variables))

    def primitive(self) -> "OneForm":
        """Divide out the rational content so coefficients are coprime integers."""
        contents = [c.content() for c in self.coefficients.values() if not c.is_zero()]
        if not contents:
            return self
        # gcd of reduced fractions = gcd(numerators) / lcm(denominators)
        g = Fraction(gcd(*(c.numerator for c in contents)), lcm(*(c.denominator for c in contents)))
        return OneForm(self.variables, {v: p / g for v, p in self.coefficients.items()})

    def __str__(self):
        parts = [f"({self.coefficient(v)})*d{v}" for v in self.variables]
        return " + ".join(parts)


@dataclass(frozen=True)
class WedgeSystem:
    q1: Polynomial
    q2: Polynomial


def darboux_one_form(h: DarbouxIntegral) -> OneForm:
    """Polynomial one-form defining the level sets of ``h``, cleared of exponent denominators."""
    scale = lcm(*(a.denominator for a in h.exponents))
    polys = [p for p, _ in h.factors]
    k = len(polys)
    # cofactors prod_{j != i} P_j via prefix/suffix products
    one = Polynomial.constant(h.variables, 1)
    prefix = [one]
    for p in polys:
        prefix.append(prefix[-1] * p)
    suffix = [one]
    for p in reversed(polys):
        suffix.append(suffix[-1] * p)
    suffix.reverse()
    cofactors = [prefix[i] * suffix[i + 1] for i in range(k)]
    coeffs = {}
    for v in h.variables:
        acc = Polynomial.zero(h.variables)
        for (p, a), cof in zip(h.factors, cofactors):
            d = p.derivative(v)
            if not d.is_zero():
                acc = acc + d * cof * (a * scale)
        coeffs[v] = acc
    return OneForm(h.variables, coeffs)


def wedge_system(omega: OneForm, roster: Sequence[str] | None = None) -> WedgeSystem:
    """Coefficients of ``omega ^ deps_1 ^ ... ^ deps_n``.

    Orientation: ``dx^deps_1^...^deps_n`` and ``dy^deps_1^...^deps_n`` are the
    positive basis 2-forms, so ``q1``/``q2`` are the dx/dy coefficients of omega.
    """
    roster = tuple(roster) if roster is not None else omega.variables
    if len(roster) < 2 or roster != omega.variables:
        raise RosterMismatch("wedge_system needs omega over a roster starting with (x, y)")
    return WedgeSystem(omega.coefficient(roster[0]), omega.coefficient(roster[1]))


def verify_integrating_factor(h: DarbouxIntegral, omega: OneForm) -> bool:
    """Check ``phi * omega_v == c * dH/dv`` for one common rational ``c`` over all v.

    Raises VerificationSkipped when some exponent is not an integer.
    """
    if not h.has_integer_exponents():
        raise VerificationSkipped("integrating-factor check needs integer exponents")
    H = h.expand()
    phi = Polynomial.constant(h.variables, 1)
    for p, a in h.factors:
        phi = phi * p ** (int(a) - 1)
    c = None
    for v in h.variables:
        lhs = phi * omega.coefficient(v)
        rhs = H.derivative(v)
        if rhs.is_zero() or lhs.is_zero():
            if not (rhs.is_zero() and lhs.is_zero()):
                return False
            continue
        e, coeff = rhs.sorted_terms()[0]
        ratio = coeff / lhs.terms.get(e, Fraction(0)) if e in lhs.terms else None
        if ratio is None:
            return False
        if c is None:
            c = ratio
        elif c != ratio:
            return False
        if lhs * c != rhs:
            return False
    return c is not None or all(omega.coefficient(v).is_zero() for v in h.variables)
