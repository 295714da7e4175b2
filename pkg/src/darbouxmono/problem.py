"""Problem files: TOML documents describing one run.

Either a Darboux integral is given by ``[[factor]]`` tables, or a monomial
system already obtained after some blow-ups is imported with ``[imported]``.
Exponents are small arithmetic expressions over ``[parameters]``::

    [problem]
    name = "three-lines"
    variables = ["x", "y", "eps"]   # (x, y, eps_1, ..., eps_n)
    jet_order = 8

    [parameters]
    a1 = "2"

    [[factor]]
    poly = "x - eps"
    exponent = "a1"

    [strategy]
    kind = "manual"                  # manual | auto-origin | auto-coordinate
    max_depth = 12
    script = [{ chart = "root", center = ["x", "y", "eps"], rename = { x = "u", y = "v" } }]

    [imported]
    variables = ["x", "y", "z"]
    integrals = [{ label = "H", gamma = ["a1", "a2", "0"], unit = "1 + z" },
                 { label = "f", gamma = ["1", "1", "0"], unit = "1" }]

``[[ledger]]`` tables describe reference formulas to be re-checked against the
computed results (see :mod:`darbouxmono.ledger`).
"""
from __future__ import annotations

import ast
import operator
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Mapping

if sys.version_info >= (3, 11):
    import tomllib
else:  # pragma: no cover
    import tomli as tomllib

from .blowup import Center, Chart
from .foliation import DarbouxIntegral
from .monomialize import ConstantFactor, MonomialSystem, ScriptStep, Strategy, StrategyKind
from .polyring import DEFAULT_ORDER, Jet, Polynomial, parse_polynomial

__all__ = ["Problem", "load_problem", "parse_problem", "evaluate_rational", "parse_script"]

_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}


def evaluate_rational(expr, params: Mapping[str, Fraction] | None = None) -> Fraction:
    """Exact value of an arithmetic expression such as ``"1/(a1-a2)"``."""
    if isinstance(expr, (int, Fraction)):
        return Fraction(expr)
    if isinstance(expr, float):
        raise ValueError(f"floating-point value {expr!r} not allowed; write a string 'p/q'")
    params = params or {}
    tree = ast.parse(str(expr).replace("^", "**"), mode="eval")

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            if node.id not in params:
                raise ValueError(f"unknown parameter {node.id!r} in {expr!r}")
            return params[node.id]
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            return _BINOPS[type(node.op)](ev(node.left), ev(node.right))
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Pow):
            e = ev(node.right)
            if e.denominator != 1:
                raise ValueError(f"non-integer power in {expr!r}")
            return ev(node.left) ** int(e)
        raise ValueError(f"unsupported syntax in exponent expression {expr!r}")

    return ev(tree)


def parse_with_parameters(text: str, variables, params: Mapping[str, Fraction]) -> Polynomial:
    """Parse a polynomial whose coefficients may mention parameters."""
    names = [p for p in params if p not in variables]
    roster = tuple(variables) + tuple(names)
    p = parse_polynomial(text, roster)
    if not names:
        return p
    bindings = {v: Polynomial.var(variables, v) for v in variables}
    bindings.update({n: Polynomial.constant(variables, params[n]) for n in names})
    return p.substitute(bindings)


def parse_script(text: str) -> tuple:
    """Script text: one ``<chart-id> <v1,v2,...> [old=new,...]`` per line; ``#`` comments."""
    steps = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (2, 3):
            raise ValueError(f"script line {lineno}: expected '<chart> <center> [renames]'")
        rename = {}
        if len(parts) == 3:
            for pair in parts[2].split(","):
                old, _, new = pair.partition("=")
                if not new:
                    raise ValueError(f"script line {lineno}: bad rename {pair!r}")
                rename[old.strip()] = new.strip()
        steps.append(ScriptStep(parts[0], Center(parts[1].split(",")), rename))
    return tuple(steps)


@dataclass
class Problem:
    name: str
    variables: tuple = ()
    parameters: dict = field(default_factory=dict)
    integral: DarbouxIntegral | None = None
    factor_sources: tuple = ()  # (poly text, exponent text) as written
    jet_order: int = DEFAULT_ORDER
    strategy: Strategy = field(default_factory=Strategy)
    imported: MonomialSystem | None = None
    imported_sources: tuple = ()
    ledger: tuple = ()
    nc_points: tuple = ()  # (chart id, {var: Fraction})

    @property
    def roster(self) -> tuple:
        if self.imported is not None:
            return self.imported.roster
        return self.variables


def _strategy(data: Mapping, params) -> Strategy:
    kind = StrategyKind(data.get("kind", "auto-origin"))
    max_depth = int(data.get("max_depth", 12))
    steps = []
    for entry in data.get("script", []):
        steps.append(
            ScriptStep(str(entry["chart"]), Center(entry["center"]), dict(entry.get("rename", {})))
        )
    return Strategy(kind, tuple(steps), max_depth)


def _imported(data: Mapping, params, order: int):
    variables = tuple(data["variables"])
    gammas, units, labels, sources = [], [], [], []
    for i, entry in enumerate(data["integrals"]):
        gammas.append(tuple(evaluate_rational(g, params) for g in entry["gamma"]))
        unit_text = str(entry.get("unit", "1"))
        units.append(Jet(parse_with_parameters(unit_text, variables, params), order))
        labels.append(str(entry.get("label", "H" if i == 0 else f"f{i}")))
        sources.append({"gamma": [str(g) for g in entry["gamma"]], "unit": unit_text})
    if len(gammas) < 1:
        raise ValueError("imported system needs at least one integral")
    chart = Chart.root(variables)
    chart = Chart("imported", chart.roster, chart.map_from_root, tuple(data.get("divisor_vars", ())))
    system = MonomialSystem(
        chart,
        gammas[0],
        tuple(gammas[1:]),
        tuple(units),
        tuple(ConstantFactor() for _ in units),
        tuple(labels),
    )
    return system, tuple(sources)


def parse_problem(data: Mapping, name: str = "problem", jet_order: int | None = None) -> Problem:
    head = data.get("problem", {})
    params = {str(k): evaluate_rational(v) for k, v in data.get("parameters", {}).items()}
    order = int(jet_order or head.get("jet_order", DEFAULT_ORDER))
    if order < 1:
        raise ValueError("jet_order must be positive")
    prob = Problem(name=str(head.get("name", name)), parameters=params, jet_order=order)
    prob.strategy = _strategy(data.get("strategy", {}), params)
    factors = data.get("factor", [])
    if factors:
        variables = tuple(head["variables"])
        prob.variables = variables
        sources, parsed = [], []
        for f in factors:
            expo = evaluate_rational(f.get("exponent", "1"), params)
            if expo <= 0:
                raise ValueError(f"exponent of {f['poly']!r} must be positive, got {expo}")
            parsed.append((parse_with_parameters(str(f["poly"]), variables, params), expo))
            sources.append((str(f["poly"]), str(f.get("exponent", "1"))))
        prob.integral = DarbouxIntegral(variables, parsed)
        prob.factor_sources = tuple(sources)
    if "imported" in data:
        prob.imported, prob.imported_sources = _imported(data["imported"], params, order)
    if prob.integral is None and prob.imported is None:
        raise ValueError("problem needs [[factor]] tables or an [imported] system")
    prob.ledger = tuple(dict(e) for e in data.get("ledger", []))
    points = []
    for entry in data.get("nc_point", []):
        points.append(
            (str(entry["chart"]), {k: evaluate_rational(v, params) for k, v in entry["at"].items()})
        )
    prob.nc_points = tuple(points)
    return prob


def load_problem(path, jet_order: int | None = None) -> Problem:
    """Read a TOML problem file; ``jet_order`` overrides the file's value."""
    path = Path(path)
    with path.open("rb") as fh:
        data = tomllib.load(fh)
    return parse_problem(data, name=path.stem, jet_order=jet_order)
