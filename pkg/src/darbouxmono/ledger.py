"""Re-checking reference formulas against computed monomial systems.

A ledger entry states a formula from an outside source (a substitution that
should kill a unit, or a vector field that should be tangent to the
foliation) and records whether it actually does. A failing entry documents a
discrepancy in the source; it is not a failure of the computation.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Mapping

from .monomialize import MonomialSystem
from .polyring import Jet, Polynomial
from .problem import evaluate_rational, parse_with_parameters
from .unitelim import ChangeOfVariables, substitution_residuals

__all__ = ["substitution_from_exponents", "check_substitution", "apply_polynomial_field", "check_field", "run_ledger"]


def substitution_from_exponents(system: MonomialSystem, exponents: Mapping[str, Fraction], unit_index: int = 0):
    """``z~_j = z_j * Delta_{unit_index} ** e_j`` for the listed variables, identity elsewhere."""
    unit = system.units[unit_index]
    unit = unit * (1 / unit.constant_term())
    factors = []
    for v in system.roster:
        e = exponents.get(v, Fraction(0))
        factors.append(unit.pow_rational(e) if e else Jet.one(system.roster, unit.order))
    return ChangeOfVariables(unit.order, system.roster, tuple(factors))


def check_substitution(system: MonomialSystem, exponents: Mapping[str, Fraction], unit_index: int = 0) -> dict:
    """Which first integrals become pure monomials under the substitution?"""
    change = substitution_from_exponents(system, exponents, unit_index)
    residuals = substitution_residuals(system, change)
    return {label: r.is_zero() for label, r in zip(system.labels, residuals)}


def apply_polynomial_field(components: Mapping[str, Polynomial], gamma, unit: Jet) -> Jet:
    """``z**-gamma * Y(z**gamma * unit)`` for ``Y = sum_j Y_j d/dz_j``.

    Each ``Y_j`` with ``gamma_j != 0`` must be divisible by ``z_j``. The
    derivative loses one order, so the residual is a jet of order ``N - 1``.
    """
    z = unit.variables
    order = unit.order - 1
    out = Jet.constant(z, 0, order)
    for j, v in enumerate(z):
        y = components.get(v)
        if y is None or y.is_zero():
            continue
        g = Fraction(gamma[j])
        if g:
            if any(e[j] == 0 for e in y.terms):
                raise ValueError(f"component along {v} is not divisible by {v}")
            y_over = Polynomial(z, {e[:j] + (e[j] - 1,) + e[j + 1:]: c for e, c in y.terms.items()})
            out = out + Jet(unit.poly, order) * Jet(y_over, order) * g
        out = out + Jet(y, order) * unit.derivative(v)
    return out


def check_field(system: MonomialSystem, components: Mapping[str, Polynomial]) -> dict:
    result = {}
    for label, gamma, unit in zip(system.labels, system.rows, system.units):
        r = apply_polynomial_field(components, gamma, unit)
        result[label] = {"annihilates": r.is_zero(), "residual": str(r.poly)}
    return result


def _eval_map(entries: Mapping, params) -> dict:
    return {str(k): evaluate_rational(v, params) for k, v in entries.items()}


def run_ledger(entry: Mapping, system: MonomialSystem, params: Mapping[str, Fraction]) -> dict:
    """Evaluate one ``[[ledger]]`` table against ``system``."""
    kind = entry.get("kind", "substitution")
    out = {"label": str(entry.get("label", kind)), "kind": kind}
    if "note" in entry:
        out["note"] = str(entry["note"])
    if kind == "substitution":
        idx = int(entry.get("unit", 0))
        out["unit"] = system.labels[idx]
        for side in ("reference", "derived"):
            if side not in entry:
                continue
            formulas = {str(k): str(v) for k, v in entry[side].items()}
            try:
                values = _eval_map(entry[side], params)
            except ZeroDivisionError:
                out[side] = {"exponents": formulas, "status": "undefined for these parameters (division by zero)"}
                continue
            preserved = check_substitution(system, values, idx)
            out[side] = {
                "exponents": formulas,
                "values": {v: str(values[v]) for v in values},
                "monomial_after_substitution": preserved,
                "all_preserved": all(preserved.values()),
            }
    elif kind == "field":
        for side in ("reference", "derived"):
            if side not in entry:
                continue
            comps = {
                str(k): parse_with_parameters(str(v), system.roster, params)
                for k, v in entry[side].items()
            }
            checks = check_field(system, comps)
            out[side] = {
                "components": {k: str(v) for k, v in entry[side].items()},
                "evaluated": {k: str(p) for k, p in comps.items()},
                "checks": checks,
                "all_annihilated": all(c["annihilates"] for c in checks.values()),
            }
    else:
        raise ValueError(f"unknown ledger kind {kind!r}")
    return out
