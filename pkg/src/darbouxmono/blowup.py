"""Chart-wise blow-ups of affine space along coordinate subspaces.

In the chart of a blow-up distinguished by the center variable ``z_j`` the
substitution is ``z_i -> z_j * z_i`` for the other center variables and the
identity elsewhere. Each chart records its composed map from the root
coordinates, so pulling back a root polynomial is one substitution.

By default variables keep their names across a blow-up (the new ``x`` in a
chart means the coordinate with ``x_parent = z_j * x``). A ``rename`` mapping
gives fresh names to the substituted variables when that reads better.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import InvalidCenter, RosterMismatch, UnknownVariable
from .polyring import DEFAULT_ORDER, Jet, Polynomial

__all__ = [
    "Center",
    "Chart",
    "ChartTree",
    "NormalCrossingsRecord",
    "blow_up",
    "pullback",
    "normal_crossings_at_origin",
]


@dataclass(frozen=True)
class Center:
    """The coordinate subspace where all of ``subspace_vars`` vanish."""

    subspace_vars: tuple

    def __init__(self, subspace_vars):
        object.__setattr__(self, "subspace_vars", tuple(subspace_vars))

    def validate(self, roster: Sequence[str]):
        if len(self.subspace_vars) < 2:
            raise InvalidCenter(f"center {self.subspace_vars} needs at least 2 variables")
        if len(set(self.subspace_vars)) != len(self.subspace_vars):
            raise InvalidCenter(f"center {self.subspace_vars} repeats a variable")
        for v in self.subspace_vars:
            if v not in roster:
                raise UnknownVariable(f"center variable {v!r} not in chart roster {tuple(roster)}")

    def __str__(self):
        return "{" + ",".join(self.subspace_vars) + "}"


@dataclass(frozen=True)
class Step:
    """One blow-up step: parent roster variable -> polynomial in the child roster."""

    center: Center
    distinguished: str
    substitution: Mapping[str, Polynomial]


@dataclass(frozen=True)
class Chart:
    id: str
    roster: tuple
    map_from_root: Mapping[str, Polynomial]
    divisor_vars: tuple = ()
    steps: tuple = field(default=(), compare=False)

    @classmethod
    def root(cls, variables: Sequence[str], divisor_vars: Sequence[str] = ()) -> "Chart":
        variables = tuple(variables)
        ident = {v: Polynomial.var(variables, v) for v in variables}
        return cls("root", variables, ident, tuple(divisor_vars), ())

    @property
    def root_roster(self) -> tuple:
        return tuple(self.map_from_root)

    @property
    def depth(self) -> int:
        return len(self.steps)

    def map_strings(self) -> dict:
        return {v: str(p) for v, p in self.map_from_root.items()}


def blow_up(chart: Chart, center: Center, rename: Mapping[str, str] | None = None) -> list:
    """Standard charts of the blow-up of ``chart`` along ``center``, in center order."""
    center.validate(chart.roster)
    rename = dict(rename or {})
    for old in rename:
        if old not in center.subspace_vars:
            raise InvalidCenter(f"can only rename center variables, not {old!r}")
    children = []
    for j in center.subspace_vars:
        new_names = tuple(
            rename.get(v, v) if (v in center.subspace_vars and v != j) else v
            for v in chart.roster
        )
        if len(set(new_names)) != len(new_names):
            raise InvalidCenter(f"renaming produces duplicate names {new_names}")
        sub = {}
        zj = Polynomial.var(new_names, j)
        for v, nv in zip(chart.roster, new_names):
            pv = Polynomial.var(new_names, nv)
            sub[v] = zj * pv if (v in center.subspace_vars and v != j) else pv
        mapped = {r: p.substitute(sub) for r, p in chart.map_from_root.items()}
        divisor = tuple(
            nv for v, nv in zip(chart.roster, new_names) if v in chart.divisor_vars or v == j
        )
        children.append(
            Chart(
                id=f"{chart.id}/{chart.depth}:{j}",
                roster=new_names,
                map_from_root=mapped,
                divisor_vars=divisor,
                steps=chart.steps + (Step(center, j, sub),),
            )
        )
    return children


def pullback(chart: Chart, p: Polynomial) -> Polynomial:
    if p.variables != chart.root_roster:
        raise RosterMismatch(f"{p} is not over the root roster {chart.root_roster}")
    return p.substitute(chart.map_from_root)


def compose_steps(chart: Chart, root_roster: Sequence[str]) -> dict:
    """Recompute ``map_from_root`` by composing the recorded single steps."""
    current = {v: Polynomial.var(tuple(root_roster), v) for v in root_roster}
    for step in chart.steps:
        current = {r: p.substitute(step.substitution) for r, p in current.items()}
    return current


@dataclass(frozen=True)
class NormalCrossingsRecord:
    """``p = z**beta * quotient``; ``ok`` iff the quotient is a unit at the origin."""

    beta: tuple
    quotient: Polynomial
    ok: bool
    order: int = DEFAULT_ORDER

    @property
    def unit(self) -> Jet:
        return Jet(self.quotient, self.order)


def normal_crossings_at_origin(
    p: Polynomial, point: Mapping[str, object] | None = None, order: int = DEFAULT_ORDER
) -> NormalCrossingsRecord:
    """Monomial-times-unit test at the chart origin, or at ``point`` after translating there."""
    if p.is_zero():
        raise ValueError("normal crossings is undefined for the zero polynomial")
    if point:
        p = p.translate(point)
    beta, q = p.monomial_content()
    return NormalCrossingsRecord(beta, q, q.constant_term() != 0, order)


class ChartTree:
    """Immutable tree of charts rooted at the identity chart."""

    def __init__(self, charts: dict, children: dict, centers: dict):
        self._charts = charts
        self._children = children
        self._centers = centers

    @classmethod
    def from_root(cls, root: Chart) -> "ChartTree":
        return cls({root.id: root}, {root.id: ()}, {})

    @property
    def root(self) -> Chart:
        return next(iter(self._charts.values()))

    def chart(self, chart_id: str) -> Chart:
        try:
            return self._charts[chart_id]
        except KeyError:
            raise KeyError(f"no chart with id {chart_id!r}") from None

    def __contains__(self, chart_id):
        return chart_id in self._charts

    def children(self, chart_id: str) -> tuple:
        return self._children[chart_id]

    def center_of(self, chart_id: str):
        return self._centers.get(chart_id)

    def is_leaf(self, chart_id: str) -> bool:
        return not self._children[chart_id]

    def charts(self) -> list:
        """All charts in depth-first preorder."""
        out = []
        stack = [self.root.id]
        while stack:
            cid = stack.pop()
            out.append(self._charts[cid])
            stack.extend(reversed(self._children[cid]))
        return out

    def leaves(self) -> list:
        return [c for c in self.charts() if self.is_leaf(c.id)]

    def blow_up(self, chart_id: str, center: Center, rename=None) -> "ChartTree":
        if not self.is_leaf(chart_id):
            raise InvalidCenter(f"chart {chart_id!r} was already blown up")
        kids = blow_up(self.chart(chart_id), center, rename)
        charts = dict(self._charts)
        children = dict(self._children)
        for k in kids:
            charts[k.id] = k
            children[k.id] = ()
        children[chart_id] = tuple(k.id for k in kids)
        centers = dict(self._centers)
        centers[chart_id] = center
        return ChartTree(charts, children, centers)

    def __len__(self):
        return len(self._charts)

    def __eq__(self, other):
        if not isinstance(other, ChartTree):
            return NotImplemented
        return (
            [c.id for c in self.charts()] == [c.id for c in other.charts()]
            and all(a == b for a, b in zip(self.charts(), other.charts()))
            and self._centers == other._centers
        )
