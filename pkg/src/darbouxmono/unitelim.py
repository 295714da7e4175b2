"""Killing the units of a monomial system by a change of variables.

With ``L_i = log Delta_i`` and the exponent matrix of maximal rank, pick
``n + 1`` independent columns ``J`` and solve ``sum_{j in J} gamma_ij W_j = L_i``.
Then ``z~_j = z_j * exp(W_j)`` turns every ``z**gamma_i * Delta_i`` into the pure
monomial ``z~**gamma_i``. All identities hold modulo the jet order.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NonGeneric, NotAUnit, UnknownVariable
from .monomialize import ConstantFactor, MonomialSystem
from .polyring import Jet, as_fraction
from .resonance import LogLinearField, apply_log_field, matrix_rank

__all__ = [
    "ChangeOfVariables",
    "PushedField",
    "normalize_units",
    "pivot_columns",
    "eliminate_units",
    "substitution_residuals",
    "push_forward_field",
    "transversality_report",
]


@dataclass(frozen=True)
class ChangeOfVariables:
    """``z~_j = z_j * V_j(z)`` with ``V_j(0) = 1``.

    ``unit_exponents[j][i]`` records ``V_j = prod_i Delta_i ** e_ji`` when the
    change came from :func:`eliminate_units`.
    """

    order: int
    variables: tuple
    factors: tuple  # of Jet, one per variable
    columns: tuple = ()
    unit_exponents: tuple = ()

    def __post_init__(self):
        for v, f in zip(self.variables, self.factors):
            if f.constant_term() != 1:
                raise NotAUnit(f"factor for {v} must have constant term 1")

    @classmethod
    def identity(cls, variables, order):
        return cls(order, tuple(variables), tuple(Jet.one(variables, order) for _ in variables))

    def factor(self, var: str) -> Jet:
        return self.factors[self.variables.index(var)]


@dataclass(frozen=True)
class PushedField:
    """``X = sum_j (alpha_j + correction_j(z)) z_j d/dz_j`` in the original coordinates."""

    linear_part: LogLinearField
    correction: tuple  # Jets with zero constant term
    variables: tuple

    @property
    def coefficients(self) -> tuple:
        return tuple(c + a for c, a in zip(self.correction, self.linear_part.alpha))

    def annihilates(self, gamma: Sequence, unit: Jet) -> bool:
        return apply_log_field(self.coefficients, gamma, unit).is_zero()


def normalize_units(system: MonomialSystem) -> MonomialSystem:
    """Scale every unit to constant term 1, moving the constant into ``dropped_constants``."""
    units, consts = [], []
    for u, c in zip(system.units, system.dropped_constants):
        k = u.constant_term()
        if not k:
            raise NotAUnit(f"unit {u} has zero constant term")
        units.append(u * (1 / k))
        consts.append((c * ConstantFactor.of(k)).simplified())
    return system.replace(units=tuple(units), dropped_constants=tuple(consts))


def pivot_columns(rows) -> tuple:
    """Leftmost set of columns of maximal rank (greedy, left to right)."""
    chosen: list = []
    rank = 0
    width = len(rows[0])
    for j in range(width):
        trial = chosen + [j]
        r = matrix_rank([[row[c] for c in trial] for row in rows])
        if r > rank:
            chosen, rank = trial, r
    return tuple(chosen)


def _invert(a):
    n = len(a)
    m = [[as_fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for c in range(n):
        p = next((r for r in range(c, n) if m[r][c]), None)
        if p is None:
            raise NonGeneric("selected columns are singular")
        m[c], m[p] = m[p], m[c]
        inv = 1 / m[c][c]
        m[c] = [x * inv for x in m[c]]
        for r in range(n):
            if r != c and m[r][c]:
                f = m[r][c]
                m[r] = [x - f * y for x, y in zip(m[r], m[c])]
    return [row[n:] for row in m]


def eliminate_units(system: MonomialSystem, order: int | None = None, columns: Sequence[int] | None = None):
    """Return ``(change, transformed)`` where ``transformed`` has every unit equal to 1.

    Raises NonGeneric when the exponent matrix does not have rank ``n + 1``.
    """
    system = normalize_units(system)
    order = system.order if order is None else order
    rows = system.rows
    need = len(rows)
    rank = matrix_rank(rows)
    if rank < need:
        raise NonGeneric(f"exponent matrix has rank {rank} < {need}: nongeneric (resonant) case")
    cols = tuple(columns) if columns is not None else pivot_columns(rows)
    if len(cols) != need:
        raise ValueError(f"need exactly {need} columns, got {cols}")
    ainv = _invert([[row[j] for j in cols] for row in rows])
    z = system.roster
    logs = [u.truncate(order).log() for u in system.units]
    factors, exps = [], []
    for j in range(len(z)):
        if j in cols:
            k = cols.index(j)
            w = Jet.constant(z, 0, order)
            for i, L in enumerate(logs):
                if ainv[k][i]:
                    w = w + L * ainv[k][i]
            factors.append(w.exp())
            exps.append(tuple(ainv[k]))
        else:
            factors.append(Jet.one(z, order))
            exps.append(tuple(Fraction(0) for _ in rows))
    change = ChangeOfVariables(order, z, tuple(factors), cols, tuple(exps))
    transformed = system.replace(units=tuple(Jet.one(z, order) for _ in rows))
    return change, transformed


def substitution_residuals(system: MonomialSystem, change: ChangeOfVariables) -> list:
    """Per integral, ``prod_j V_j**gamma_ij - Delta_i`` (zero iff that integral becomes monomial)."""
    out = []
    for gamma, unit in zip(system.rows, system.units):
        unit = unit.truncate(change.order)
        unit = unit * (1 / unit.constant_term())
        prod = Jet.one(change.variables, change.order)
        for g, v in zip(gamma, change.factors):
            if g:
                prod = prod * v.pow_rational(g)
        out.append(prod - unit)
    return out


def push_forward_field(field: LogLinearField, change: ChangeOfVariables) -> PushedField:
    """Express ``sum alpha_j z~_j d/dz~_j`` in the coordinates ``z``.

    Writing ``X(z_k) = c_k z_k`` and ``W_k = log V_k``, the chain rule gives
    ``c_k + sum_j (z_j dW_k/dz_j) c_j = alpha_k``; the correction matrix has no
    constant term, so fixed-point iteration converges in ``order`` steps.
    """
    z, order = change.variables, change.order
    alpha = field.alpha
    if len(alpha) != len(z):
        raise ValueError("field and change of variables have different dimensions")
    logs = [v.log() for v in change.factors]
    d = [[logs[k].euler(zj) for zj in z] for k in range(len(z))]
    c = [Jet.constant(z, a, order) for a in alpha]
    for _ in range(order + 1):
        c = [
            Jet.constant(z, alpha[k], order)
            - sum((d[k][j] * c[j] for j in range(len(z)) if not d[k][j].is_zero()), Jet.constant(z, 0, order))
            for k in range(len(z))
        ]
    correction = tuple(ck - a for ck, a in zip(c, alpha))
    return PushedField(LogLinearField(alpha), correction, z)


def transversality_report(field: PushedField, divisor_var: str) -> dict:
    """Transversal to ``{divisor_var = 0}`` iff that component of the linear part is nonzero."""
    if divisor_var not in field.variables:
        raise UnknownVariable(f"{divisor_var!r} not in {field.variables}")
    coeff = field.linear_part.alpha[field.variables.index(divisor_var)]
    transversal = coeff != 0
    detail = (
        f"linear part has {divisor_var}-component {coeff}"
        + ("; the field leaves the leaf" if transversal else "; the field is tangent to the leaf")
    )
    return {"transversal": transversal, "detail": detail, "component": coeff}
