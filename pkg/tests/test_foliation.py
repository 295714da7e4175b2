from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from darbouxmono import Polynomial, parse_polynomial
from darbouxmono.errors import RosterMismatch, VerificationSkipped
from darbouxmono.foliation import (
    DarbouxIntegral,
    OneForm,
    darboux_one_form,
    verify_integrating_factor,
    wedge_system,
)

XYE = ("x", "y", "eps")
XY = ("x", "y")


def P(text, variables=XYE):
    return parse_polynomial(text, variables)


def three_lines(a1, a2, a3):
    return DarbouxIntegral.parse(XYE, [("x - eps", a1), ("x - y", a2), ("x + y", a3)])


def displayed_form(a1, a2, a3):
    """The three-lines one-form as written by hand, coefficient by coefficient."""
    env = {"a1": a1, "a2": a2, "a3": a3}
    dx = "a1*(x-y)*(x+y) + a2*(x-eps)*(x+y) + a3*(x-eps)*(x-y)"
    dy = "-(a2*(x-eps)*(x+y) - a3*(x-eps)*(x-y))"
    de = "-a1*(x-y)*(x+y)"
    out = {}
    for v, text in zip(XYE, (dx, dy, de)):
        for name, val in env.items():
            text = text.replace(name, f"({val})")
        out[v] = P(text)
    return out


@pytest.mark.parametrize("a", [(1, 1, 1), (2, 3, 5)])
def test_three_lines_matches_hand_expansion(a):
    omega = darboux_one_form(three_lines(*a))
    expected = displayed_form(*a)
    for v in XYE:
        assert omega.coefficient(v) == expected[v]
    assert verify_integrating_factor(three_lines(*a), omega)


def test_three_lines_wedge():
    omega = darboux_one_form(three_lines(1, 1, 1))
    w = wedge_system(omega)
    assert w.q1 == P("(x-y)*(x+y) + (x-eps)*(x+y) + (x-eps)*(x-y)")
    assert w.q2 == P("-((x-eps)*(x+y) - (x-eps)*(x-y))")


def test_single_factor_normalizes_to_dx():
    omega = darboux_one_form(DarbouxIntegral.parse(XY, [("x", 4)]))
    assert omega.coefficient("x") == Polynomial.constant(XY, 4)
    assert omega.coefficient("y").is_zero()
    prim = omega.primitive()
    assert prim.coefficient("x") == Polynomial.constant(XY, 1)


def test_exact_product():
    omega = darboux_one_form(DarbouxIntegral.parse(XY, [("x*y", 1)]))
    assert omega.coefficient("x") == P("y", XY)
    assert omega.coefficient("y") == P("x", XY)
    w = wedge_system(omega)
    assert (w.q1, w.q2) == (P("y", XY), P("x", XY))


def test_wedge_of_dx():
    one, zero = Polynomial.constant(XYE, 1), Polynomial.zero(XYE)
    w = wedge_system(OneForm(XYE, {"x": one, "y": zero, "eps": zero}))
    assert w.q1 == one and w.q2.is_zero()


def test_wedge_roster_check():
    omega = darboux_one_form(three_lines(1, 1, 1))
    with pytest.raises(RosterMismatch):
        wedge_system(omega, ("y", "x", "eps"))


def test_integrating_factor_scaled_form():
    h = DarbouxIntegral.parse(XY, [("x", 2)])
    one, zero = Polynomial.constant(XY, 1), Polynomial.zero(XY)
    assert verify_integrating_factor(h, OneForm(XY, {"x": one, "y": zero}))


def test_corrupted_form_is_detected():
    h = three_lines(1, 1, 1)
    omega = darboux_one_form(h)
    coeffs = dict(omega.coefficients)
    coeffs["x"] = coeffs["x"] + 1
    assert not verify_integrating_factor(h, OneForm(XYE, coeffs))


def test_rational_exponents_skip_verification():
    h = three_lines(Fraction(1, 2), 1, Fraction(2, 3))
    omega = darboux_one_form(h)
    # denominators are cleared: the form has integer coefficients
    assert all(c.denominator == 1 for p in omega.coefficients.values() for c in p.terms.values())
    with pytest.raises(VerificationSkipped):
        verify_integrating_factor(h, omega)


def test_invalid_integrals():
    with pytest.raises(ValueError):
        DarbouxIntegral.parse(XYE, [("x", 0)])
    with pytest.raises(ValueError):
        DarbouxIntegral.parse(XYE, [])
    with pytest.raises(RosterMismatch):
        DarbouxIntegral(XYE, [(P("x", XY), 1)])


def test_shared_factor_needs_no_division():
    h = DarbouxIntegral.parse(XY, [("x - y", 2), ("x - y", 1)])
    omega = darboux_one_form(h)
    assert verify_integrating_factor(h, omega)


def _sympy(p: Polynomial, symbols):
    return sum(
        sympy.Rational(c.numerator, c.denominator) * sympy.prod([s ** e for s, e in zip(symbols, exps)])
        for exps, c in p.terms.items()
    )


linear_forms = st.lists(st.integers(-3, 3), min_size=4, max_size=4).filter(lambda c: any(c[:3]))


@settings(max_examples=50, deadline=None)
@given(st.lists(st.tuples(linear_forms, st.integers(1, 3)), min_size=1, max_size=3))
def test_random_integer_integrals_against_sympy(data):
    syms = sympy.symbols("x y eps")
    factors = []
    for (cx, cy, ce, c0), a in data:
        p = Polynomial(XYE, {(1, 0, 0): cx, (0, 1, 0): cy, (0, 0, 1): ce, (0, 0, 0): c0})
        factors.append((p, a))
    h = DarbouxIntegral(XYE, factors)
    omega = darboux_one_form(h)
    assert verify_integrating_factor(h, omega)
    H = sympy.prod([_sympy(p, syms) ** a for p, a in factors])
    phi = sympy.prod([_sympy(p, syms) ** (a - 1) for p, a in factors])
    for v, s in zip(XYE, syms):
        assert sympy.expand(phi * _sympy(omega.coefficient(v), syms) - sympy.diff(H, s)) == 0


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 4), st.integers(1, 4), st.integers(1, 4), st.integers(2, 5))
def test_scaling_exponents_scales_form(a1, a2, a3, t):
    base = darboux_one_form(three_lines(a1, a2, a3))
    scaled = darboux_one_form(three_lines(a1 * t, a2 * t, a3 * t))
    for v in XYE:
        assert scaled.coefficient(v) == base.coefficient(v) * t
    assert scaled.primitive() == base.primitive()
