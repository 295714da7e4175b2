from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from darbouxmono import Polynomial, parse_polynomial
from darbouxmono.blowup import Center, Chart, ChartTree, normal_crossings_at_origin, pullback
from darbouxmono.errors import DepthExceeded, ManualScriptExhausted
from darbouxmono.foliation import DarbouxIntegral
from darbouxmono.monomialize import (
    ConstantFactor,
    Strategy,
    StrategyKind,
    assemble_system,
    monomialize_all,
    monomialize_factor,
    monomialize_sequence,
    verify_system,
)

XYE = ("x", "y", "eps")

THREE_STEP = [
    ("root", ("x", "y", "eps"), {"x": "u", "y": "v"}),
    ("root/0:eps", ("u", "v")),
    ("root/0:y", ("u", "eps")),
]


def three_lines(a1, a2, a3):
    return DarbouxIntegral.parse(XYE, [("x - eps", a1), ("x - y", a2), ("x + y", a3)])


def P(text, variables=XYE):
    return parse_polynomial(text, variables)


def root_tree(variables=XYE):
    return ChartTree.from_root(Chart.root(variables))


def test_single_line_needs_one_blow_up():
    strategy = Strategy(StrategyKind.AUTO_COORDINATE)
    tree = monomialize_factor(root_tree(), P("x - y"), strategy)
    assert len(tree.leaves()) == 2
    for leaf in tree.leaves():
        assert normal_crossings_at_origin(pullback(leaf, P("x - y"))).ok


def test_monomial_needs_nothing():
    tree = monomialize_factor(root_tree(), P("x^2*y"), Strategy())
    assert len(tree) == 1


def test_empty_manual_script():
    with pytest.raises(ManualScriptExhausted) as info:
        monomialize_factor(root_tree(), P("x - eps"), Strategy(StrategyKind.MANUAL))
    assert info.value.leaf_ids == ("root",)


def test_two_step_script_leaves_y_chart_unresolved():
    h = three_lines(1, 1, 1)
    with pytest.raises(ManualScriptExhausted) as info:
        monomialize_sequence(h, Strategy.manual(THREE_STEP[:2]))
    assert "root/0:y" in info.value.leaf_ids


def test_three_lines_documented_leaf():
    h = three_lines(2, 3, 5)
    result = monomialize_all(h, Strategy.manual(THREE_STEP))
    assert not result.failed and not result.unused_script
    assert [c.id for c in result.tree.leaves()] == [
        "root/0:x", "root/0:y/1:u", "root/0:y/1:eps", "root/0:eps/1:u", "root/0:eps/1:v",
    ]
    leaf = next(s for s in result.systems if s.chart.id == "root/0:eps/1:u")
    assert leaf.roster == ("u", "v", "eps")
    assert leaf.gamma0 == (3 + 5, 0, 2 + 3 + 5)
    assert leaf.gammas == ((0, 0, 1),)
    for s in result.systems:
        assert all(verify_system(s, h).values()), s.chart.id


def test_already_monomial_integral():
    h = DarbouxIntegral.parse(XYE, [("x", 2), ("y", 3)])
    (system,) = monomialize_sequence(h, Strategy())
    assert system.gamma0 == (2, 3, 0)
    assert system.gammas == ((0, 0, 1),)
    assert all(u.poly == Polynomial.constant(XYE, 1) for u in system.units)


def test_origin_strategy_can_fail_where_coordinate_strategy_succeeds():
    h = DarbouxIntegral.parse(XYE, [("y - x*eps", 1)])
    with pytest.raises(DepthExceeded):
        monomialize_sequence(h, Strategy(StrategyKind.AUTO_ORIGIN, max_depth=3))
    systems = monomialize_sequence(h, Strategy(StrategyKind.AUTO_COORDINATE))
    assert all(all(verify_system(s, h).values()) for s in systems)


def test_failures_are_recorded_per_leaf():
    h = three_lines(1, 1, 1)
    result = monomialize_all(h, Strategy.manual(THREE_STEP[:2]))
    assert set(result.failed) == {"root/0:y"}
    assert {s.chart.id for s in result.systems} == {"root/0:x", "root/0:eps/1:u", "root/0:eps/1:v"}


def test_renaming_eps_rejected():
    with pytest.raises(ValueError):
        monomialize_all(three_lines(1, 1, 1), Strategy.manual([("root", XYE, {"eps": "e"})]))


@pytest.mark.parametrize(
    "curve",
    ["y^2 - x^3", "y^2 - x^2 - x^3", "y^2 - x^4", "y^3 - x^5", "x*y*(x - y)*(x + y)", "y^2 - x^5"],
)
def test_plane_curves_resolve_by_point_blow_ups(curve):
    h = DarbouxIntegral.parse(("x", "y"), [(curve, 1)])
    systems = monomialize_sequence(h, Strategy(StrategyKind.AUTO_ORIGIN, max_depth=12), order=4)
    assert systems
    for s in systems:
        assert all(verify_system(s, h).values())


def test_deterministic():
    h = three_lines(1, 2, 3)
    a = monomialize_all(h, Strategy(StrategyKind.AUTO_COORDINATE))
    b = monomialize_all(h, Strategy(StrategyKind.AUTO_COORDINATE))
    assert a.tree == b.tree
    assert [s.gamma0 for s in a.systems] == [s.gamma0 for s in b.systems]


def test_rational_exponents_keep_constants_symbolic():
    h = DarbouxIntegral.parse(XYE, [("x - eps", "1/2"), ("x - y", 1), ("x + y", "2/3")])
    systems = monomialize_sequence(h, Strategy.manual(THREE_STEP))
    leaf = next(s for s in systems if s.chart.id == "root/0:eps/1:u")
    assert leaf.gamma0 == (Fraction(5, 3), 0, Fraction(13, 6))
    assert leaf.dropped_constants[0].exact() is None
    assert str(leaf.dropped_constants[0]) == "(-1)^(1/2)"
    assert all(verify_system(leaf, h).values())


def test_constant_factor_arithmetic():
    c = ConstantFactor.of(2, 3) * ConstantFactor.of(-1) * ConstantFactor.of(5, Fraction(1, 2))
    assert str(c) == "-8*(5)^(1/2)"
    assert c.exact() is None
    assert (ConstantFactor.of(2, 2) * ConstantFactor.of(3)).exact() == 12
    assert str(ConstantFactor()) == "1"


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 5), st.integers(1, 5), st.integers(1, 5))
def test_gamma0_is_additive(a1, a2, a3):
    h = three_lines(a1, a2, a3)
    for s in monomialize_sequence(h, Strategy.manual(THREE_STEP)):
        total = [0, 0, 0]
        for beta, _, a in s.factor_records:
            total = [t + a * b for t, b in zip(total, beta)]
        assert tuple(total) == s.gamma0
        checks = verify_system(s, h)
        assert checks["gamma0_from_expanded_H"] and checks["unit0_from_expanded_H"]
