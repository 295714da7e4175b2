"""Exponent-matrix analysis: rank, resonance and the log-linear generator field.

The rows of the exponent matrix are gamma_0, ..., gamma_n, each of length
n + 2. When the rank is maximal the kernel is a line, spanned by the
coefficients of the field ``X = sum_j alpha_j z_j d/dz_j`` that kills every
monomial ``z**gamma_i``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm
from typing import Sequence

from .errors import RankDeficient
from .polyring import Jet, as_fraction

__all__ = [
    "ExponentMatrix",
    "LogLinearField",
    "matrix_rank",
    "nullspace",
    "is_resonant",
    "generator_field",
    "verify_annihilation",
    "primitive_vector",
    "apply_log_field",
]


@dataclass(frozen=True)
class ExponentMatrix:
    rows: tuple

    def __init__(self, rows):
        rows = tuple(tuple(as_fraction(x) for x in r) for r in rows)
        if rows and any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged exponent matrix")
        object.__setattr__(self, "rows", rows)

    @property
    def shape(self):
        return (len(self.rows), len(self.rows[0]) if self.rows else 0)

    def is_square_plus_one(self) -> bool:
        r, c = self.shape
        return c == r + 1


@dataclass(frozen=True)
class LogLinearField:
    """``X = sum_j alpha_j z_j d/dz_j``."""

    alpha: tuple

    def __init__(self, alpha):
        object.__setattr__(self, "alpha", tuple(as_fraction(a) for a in alpha))

    def primitive(self) -> "LogLinearField":
        return LogLinearField(primitive_vector(self.alpha))

    def __str__(self):
        return "(" + ", ".join(str(a) for a in self.alpha) + ")"


def _integer_rows(rows) -> list:
    out = []
    for r in rows:
        d = lcm(*(x.denominator for x in r)) if r else 1
        out.append([int(x * d) for x in r])
    return out


def matrix_rank(m) -> int:
    """Exact rank by fraction-free (Bareiss) elimination."""
    rows = m.rows if isinstance(m, ExponentMatrix) else ExponentMatrix(m).rows
    a = _integer_rows(rows)
    if not a:
        return 0
    nrows, ncols = len(a), len(a[0])
    rank, prev = 0, 1
    for col in range(ncols):
        pivot = next((r for r in range(rank, nrows) if a[r][col]), None)
        if pivot is None:
            continue
        a[rank], a[pivot] = a[pivot], a[rank]
        for r in range(rank + 1, nrows):
            for c in range(col + 1, ncols):
                a[r][c] = (a[rank][col] * a[r][c] - a[r][col] * a[rank][c]) // prev
            a[r][col] = 0
        prev = a[rank][col]
        rank += 1
        if rank == nrows:
            break
    return rank


def nullspace(rows: Sequence[Sequence]) -> list:
    """Basis of ``{v : M v = 0}`` from the reduced row echelon form, one vector per free column."""
    a = [[as_fraction(x) for x in r] for r in rows]
    ncols = len(a[0]) if a else 0
    pivots = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(a)) if a[i][c]), None)
        if p is None:
            continue
        a[r], a[p] = a[p], a[r]
        inv = 1 / a[r][c]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][f]
        basis.append(tuple(v))
    return basis


def primitive_vector(v: Sequence) -> tuple:
    """Integer multiple with coprime entries and first nonzero entry positive."""
    v = [as_fraction(x) for x in v]
    if not any(v):
        raise ValueError("the zero vector has no primitive form")
    d = lcm(*(x.denominator for x in v))
    ints = [int(x * d) for x in v]
    g = gcd(*ints)
    ints = [x // g for x in ints]
    if next(x for x in ints if x) < 0:
        ints = [-x for x in ints]
    return tuple(Fraction(x) for x in ints)


def is_resonant(gamma0: Sequence, gammas: Sequence[Sequence]) -> bool:
    """True iff ``gamma0`` and ``sum(gammas)`` are linearly dependent (all 2x2 minors vanish)."""
    g0 = [as_fraction(x) for x in gamma0]
    total = [Fraction(0)] * len(g0)
    for g in gammas:
        if len(g) != len(g0):
            raise ValueError(f"dimension mismatch: {len(g)} vs {len(g0)}")
        total = [t + as_fraction(x) for t, x in zip(total, g)]
    return all(g0[i] * total[j] - g0[j] * total[i] == 0 for i, j in combinations(range(len(g0)), 2))


def generator_field(m) -> LogLinearField:
    """Primitive generator of the kernel of a maximal-rank ``(n+1) x (n+2)`` exponent matrix."""
    m = m if isinstance(m, ExponentMatrix) else ExponentMatrix(m)
    basis = nullspace(m.rows)
    if len(basis) != 1:
        raise RankDeficient(
            f"kernel has dimension {len(basis)}; exponent matrix rank {matrix_rank(m)} is not maximal"
        )
    return LogLinearField(primitive_vector(basis[0]))


def apply_log_field(coeffs: Sequence, gamma: Sequence, unit: Jet) -> Jet:
    """``z**-gamma * X(z**gamma * unit)`` for ``X = sum_j coeffs_j z_j d/dz_j``.

    ``coeffs`` may be rationals or jets (a log-linear field with power-series
    coefficients); the monomial is handled through its exponents, so
    rational ``gamma`` is fine.
    """
    z = unit.variables
    out = Jet.constant(z, 0, unit.order)
    for c, g, v in zip(coeffs, gamma, z):
        term = unit * as_fraction(g) + unit.euler(v)
        out = out + (term * c if isinstance(c, Jet) else term * as_fraction(c))
    return out


def verify_annihilation(field: LogLinearField, gamma: Sequence, unit: Jet | None = None) -> bool:
    """Does ``field`` kill ``z**gamma`` (times ``unit`` if given, modulo its order)?"""
    if len(field.alpha) != len(gamma):
        raise ValueError("field and exponent vector lengths differ")
    if unit is None:
        return sum(a * as_fraction(g) for a, g in zip(field.alpha, gamma)) == 0
    return apply_log_field(field.alpha, gamma, unit).is_zero()
