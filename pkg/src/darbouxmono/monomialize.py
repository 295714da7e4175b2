"""Sequential monomialization of the factors of a Darboux integral.

Factors are treated in order. Each is blown up (by a manual script or a
heuristic) until its pullback is monomial times unit at the origin of every
leaf chart; later blow-ups keep earlier factors in that form because chart
origins map to parent origins. Each leaf then yields a MonomialSystem::

    H   = z**gamma_0 * c_0 * Delta_0,   gamma_0 = sum_i a_i * beta_i
    eps = z**gamma_l * c_l * Delta_l
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .blowup import Center, Chart, ChartTree, normal_crossings_at_origin, pullback
from .errors import DepthExceeded, ManualScriptExhausted, StabilityViolation
from .foliation import DarbouxIntegral
from .polyring import DEFAULT_ORDER, Jet, Polynomial, as_fraction

__all__ = [
    "StrategyKind",
    "ScriptStep",
    "Strategy",
    "ConstantFactor",
    "MonomialSystem",
    "Monomialization",
    "monomialize_factor",
    "monomialize_sequence",
    "monomialize_all",
    "assemble_system",
    "verify_system",
]


class StrategyKind(enum.Enum):
    MANUAL = "manual"
    AUTO_ORIGIN = "auto-origin"
    AUTO_COORDINATE = "auto-coordinate"


@dataclass(frozen=True)
class ScriptStep:
    chart: str
    center: Center
    rename: Mapping[str, str] = field(default_factory=dict)


@dataclass(frozen=True)
class Strategy:
    kind: StrategyKind = StrategyKind.AUTO_ORIGIN
    script: tuple = ()
    max_depth: int = 12

    def __post_init__(self):
        object.__setattr__(self, "kind", StrategyKind(self.kind))
        object.__setattr__(self, "script", tuple(self.script))
        if self.max_depth < 1:
            raise ValueError("max_depth must be at least 1")

    @classmethod
    def manual(cls, steps, max_depth=12):
        script = []
        for s in steps:
            if isinstance(s, ScriptStep):
                script.append(s)
            else:
                chart, center, *rest = s
                script.append(ScriptStep(chart, Center(center), dict(rest[0]) if rest else {}))
        return cls(StrategyKind.MANUAL, tuple(script), max_depth)


@dataclass(frozen=True)
class ConstantFactor:
    """A constant ``prod base**exponent`` dropped from a first integral.

    Rational powers of rationals are kept symbolic; ``exact()`` returns the
    value only when it is rational by construction.
    """

    powers: tuple = ()  # of (Fraction base, Fraction exponent)

    @classmethod
    def of(cls, value, exponent=1):
        return cls(((as_fraction(value), as_fraction(exponent)),))

    def __mul__(self, other: "ConstantFactor") -> "ConstantFactor":
        return ConstantFactor(self.powers + other.powers)

    def simplified(self) -> "ConstantFactor":
        rational = Fraction(1)
        rest = []
        for b, e in self.powers:
            if b == 1 or e == 0:
                continue
            if e.denominator == 1:
                rational *= b ** int(e)
            else:
                rest.append((b, e))
        head = ((rational, Fraction(1)),) if rational != 1 or not rest else ()
        return ConstantFactor(head + tuple(rest))

    def __eq__(self, other):
        if not isinstance(other, ConstantFactor):
            return NotImplemented
        return self.simplified().powers == other.simplified().powers

    def __hash__(self):
        return hash(self.simplified().powers)

    def exact(self):
        s = self.simplified()
        if all(e.denominator == 1 for _, e in s.powers):
            out = Fraction(1)
            for b, e in s.powers:
                out *= b ** int(e)
            return out
        return None

    def __str__(self):
        s = self.simplified()
        return "*".join(str(b) if e == 1 else f"({b})^({e})" for b, e in s.powers) or "1"


@dataclass(frozen=True)
class MonomialSystem:
    """Per-leaf record ``H = z^gamma0 * c0 * Delta0``, ``eps_l = z^gamma_l * c_l * Delta_l``."""

    chart: Chart
    gamma0: tuple
    gammas: tuple
    units: tuple
    dropped_constants: tuple
    labels: tuple = ()
    factor_records: tuple = ()  # (beta, quotient, exponent) per factor; empty for imports

    def __post_init__(self):
        object.__setattr__(self, "gamma0", tuple(as_fraction(g) for g in self.gamma0))
        object.__setattr__(
            self, "gammas", tuple(tuple(as_fraction(g) for g in row) for row in self.gammas)
        )
        object.__setattr__(self, "units", tuple(self.units))
        object.__setattr__(self, "dropped_constants", tuple(self.dropped_constants))
        width = len(self.chart.roster)
        for row in self.rows:
            if len(row) != width:
                raise ValueError(f"exponent row {row} does not match roster {self.chart.roster}")
        if len(self.units) != len(self.rows) or len(self.dropped_constants) != len(self.rows):
            raise ValueError("need one unit and one constant per first integral")
        if not self.labels:
            object.__setattr__(
                self, "labels", ("H",) + tuple(f"f{i}" for i in range(1, len(self.gammas) + 1))
            )

    @property
    def rows(self) -> tuple:
        return (self.gamma0,) + self.gammas

    @property
    def roster(self) -> tuple:
        return self.chart.roster

    @property
    def n(self) -> int:
        return len(self.gammas)

    @property
    def order(self) -> int:
        return self.units[0].order

    def replace(self, **changes) -> "MonomialSystem":
        from dataclasses import replace

        return replace(self, **changes)


@dataclass
class Monomialization:
    tree: ChartTree
    systems: list
    failed: dict  # leaf id -> reason string
    unused_script: tuple = ()


# -- center selection ------------------------------------------------------

def _auto_origin_center(q: Polynomial) -> Center:
    used = q.used_variables()
    if len(used) < 2:
        # a content-free polynomial in one variable has a nonzero constant term
        raise StabilityViolation(f"unexpected non-unit {q} in fewer than two variables")
    return Center(used)


def _auto_coordinate_center(q: Polynomial) -> Center:
    used = q.used_variables()
    idx = {v: i for i, v in enumerate(q.variables)}
    for a in range(len(used)):
        for b in range(a + 1, len(used)):
            i, j = idx[used[a]], idx[used[b]]
            if all(e[i] or e[j] for e in q.terms):
                return Center((used[a], used[b]))
    return _auto_origin_center(q)


def _choose_center(strategy: Strategy, q: Polynomial) -> Center:
    if strategy.kind is StrategyKind.AUTO_COORDINATE:
        return _auto_coordinate_center(q)
    return _auto_origin_center(q)


def _failing_leaves(tree: ChartTree, p: Polynomial, skip=()):
    out = []
    for leaf in tree.leaves():
        if leaf.id in skip:
            continue
        rec = normal_crossings_at_origin(pullback(leaf, p))
        if not rec.ok:
            out.append((leaf, rec))
    return out


def _next_script_step(tree: ChartTree, strategy: Strategy):
    for step in strategy.script:
        if step.chart in tree and tree.is_leaf(step.chart):
            return step
    return None


def _monomialize(tree, p, strategy, failed: dict):
    """Blow up until ``p`` is normal crossings in every leaf not listed in ``failed``.

    Leaves that cannot be resolved are recorded in ``failed`` (id -> reason).
    """
    if p.is_zero():
        raise ValueError("cannot monomialize the zero polynomial")
    while True:
        failing = _failing_leaves(tree, p, skip=failed)
        if not failing:
            return tree
        if strategy.kind is StrategyKind.MANUAL:
            step = _next_script_step(tree, strategy)
            if step is None:
                for leaf, _ in failing:
                    failed[leaf.id] = "manual script exhausted"
                return tree
            if tree.chart(step.chart).depth >= strategy.max_depth:
                failed[step.chart] = f"max_depth {strategy.max_depth} exceeded"
                return tree
            tree = tree.blow_up(step.chart, step.center, step.rename)
            continue
        for leaf, rec in failing:
            if leaf.depth >= strategy.max_depth:
                failed[leaf.id] = f"max_depth {strategy.max_depth} exceeded"
                continue
            tree = tree.blow_up(leaf.id, _choose_center(strategy, rec.quotient))


def _raise_for(failed: dict, strategy: Strategy):
    if not failed:
        return
    ids = sorted(failed)
    if any(r.startswith("max_depth") for r in failed.values()):
        raise DepthExceeded(strategy.max_depth, ids)
    raise ManualScriptExhausted(ids)


def monomialize_factor(tree: ChartTree, p: Polynomial, strategy: Strategy) -> ChartTree:
    """Extend ``tree`` until ``p`` pulls back to monomial times unit in every leaf."""
    failed: dict = {}
    tree = _monomialize(tree, p, strategy, failed)
    _raise_for(failed, strategy)
    return tree


def assemble_system(chart: Chart, h: DarbouxIntegral, order: int = DEFAULT_ORDER) -> MonomialSystem:
    """Read off ``gamma``, units and constants of ``h`` and the eps-coordinates in ``chart``."""
    gamma0 = [Fraction(0)] * len(chart.roster)
    unit0 = Jet.one(chart.roster, order)
    const0 = ConstantFactor()
    records = []
    for i, (p, a) in enumerate(h.factors):
        rec = normal_crossings_at_origin(pullback(chart, p), order=order)
        if not rec.ok:
            raise StabilityViolation(f"factor {i + 1} ({p}) lost normal crossings in {chart.id}")
        c = rec.quotient.constant_term()
        gamma0 = [g + a * b for g, b in zip(gamma0, rec.beta)]
        unit0 = unit0 * Jet(rec.quotient / c, order).pow_rational(a)
        const0 = const0 * ConstantFactor.of(c, a)
        records.append((rec.beta, rec.quotient, a))
    gammas, units, consts = [], [unit0], [const0.simplified()]
    for e in h.eps:
        rec = normal_crossings_at_origin(chart.map_from_root[e], order=order)
        if not rec.ok:
            raise StabilityViolation(f"{e} is not monomial times unit in {chart.id}")
        c = rec.quotient.constant_term()
        gammas.append(tuple(Fraction(b) for b in rec.beta))
        units.append(Jet(rec.quotient / c, order))
        consts.append(ConstantFactor.of(c))
    labels = ("H",) + tuple(h.eps)
    return MonomialSystem(
        chart, tuple(gamma0), tuple(gammas), tuple(units), tuple(consts), labels, tuple(records)
    )


def monomialize_all(
    h: DarbouxIntegral, strategy: Strategy, order: int = DEFAULT_ORDER, tree: ChartTree | None = None
) -> Monomialization:
    """Run every factor through the strategy; unresolved leaves are reported, not raised."""
    tree = tree or ChartTree.from_root(Chart.root(h.variables))
    for v in (v for step in strategy.script for v in step.rename):
        if v in h.eps:
            raise ValueError(f"eps-coordinate {v!r} may not be renamed")
    failed: dict = {}
    for p, _ in h.factors:
        tree = _monomialize(tree, p, strategy, failed)
    systems = []
    for leaf in tree.leaves():
        if leaf.id in failed:
            continue
        systems.append(assemble_system(leaf, h, order))
    unused = tuple(s for s in strategy.script if s.chart not in tree or tree.is_leaf(s.chart))
    return Monomialization(tree, systems, failed, unused)


def monomialize_sequence(
    h: DarbouxIntegral, strategy: Strategy, order: int = DEFAULT_ORDER
) -> list:
    """One MonomialSystem per leaf chart; raises if any leaf could not be resolved."""
    result = monomialize_all(h, strategy, order)
    _raise_for(result.failed, strategy)
    return result.systems


def verify_system(system: MonomialSystem, h: DarbouxIntegral) -> dict:
    """Independent re-check of a monomialized leaf against the root data.

    Returns ``{check name: bool}``. Exact where the objects are polynomials,
    modulo the jet order for the units.
    """
    chart, order = system.chart, system.order
    z = chart.roster
    out = {}
    # eps_l: exact monomial reconstruction
    ok = True
    for e, gamma, unit, const in zip(h.eps, system.gammas, system.units[1:], system.dropped_constants[1:]):
        mono = Polynomial.monomial(z, [int(g) for g in gamma], const.exact())
        ok &= mono * unit.poly == chart.map_from_root[e]
    out["eps_reconstruction"] = ok
    # each factor: z^beta * quotient == pullback, quotient(0) != 0
    ok = True
    gamma0 = [Fraction(0)] * len(z)
    for (p, a), (beta, quotient, _) in zip(h.factors, system.factor_records):
        ok &= Polynomial.monomial(z, beta) * quotient == pullback(chart, p)
        ok &= quotient.constant_term() != 0
        gamma0 = [g + a * b for g, b in zip(gamma0, beta)]
    out["factor_normal_crossings"] = ok
    out["gamma0_additivity"] = tuple(gamma0) == system.gamma0
    # Delta_0 against the product of normalized quotients, and against pullback(H) when polynomial
    prod = Jet.one(z, order)
    for beta, quotient, a in system.factor_records:
        prod = prod * Jet(quotient / quotient.constant_term(), order).pow_rational(a)
    out["unit0_jet"] = prod == system.units[0] and system.units[0].constant_term() == 1
    if h.has_integer_exponents():
        H = pullback(chart, h.expand())
        beta, q = H.monomial_content()
        c = system.dropped_constants[0].exact()
        out["gamma0_from_expanded_H"] = tuple(Fraction(b) for b in beta) == system.gamma0
        out["unit0_from_expanded_H"] = Jet(q, order) == system.units[0] * c
    return out
