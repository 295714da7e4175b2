from fractions import Fraction

from hypothesis import strategies as st

from darbouxmono import Polynomial

XYZ = ("x", "y", "z")


def small_fractions(max_num=6, max_den=4):
    return st.builds(
        Fraction,
        st.integers(-max_num, max_num),
        st.integers(1, max_den),
    )


@st.composite
def polynomials(draw, variables=XYZ, max_terms=4, max_exp=3):
    n = draw(st.integers(0, max_terms))
    terms = {}
    for _ in range(n):
        e = tuple(draw(st.integers(0, max_exp)) for _ in variables)
        terms[e] = terms.get(e, Fraction(0)) + draw(small_fractions())
    return Polynomial(variables, terms)


@st.composite
def units(draw, variables=XYZ, max_terms=3, max_exp=2):
    """Polynomial with constant term 1."""
    p = draw(polynomials(variables, max_terms, max_exp))
    return p - p.constant_term() + 1
