"""
Killing a unit by a change of variables
=======================================

After blow-ups a foliation may be given by H = x^a1 y^a2 (1 + z) and f = x y.
When the exponent vectors are independent, rescaling x and y by powers of
(1 + z) absorbs the unit and both integrals become pure monomials. The
tangent field z d/dz of the new coordinates is then pushed back.
"""

from fractions import Fraction

from darbouxmono import Jet, parse_polynomial
from darbouxmono.blowup import Chart
from darbouxmono.errors import NonGeneric
from darbouxmono.ledger import check_substitution
from darbouxmono.monomialize import ConstantFactor, MonomialSystem
from darbouxmono.resonance import generator_field
from darbouxmono.unitelim import eliminate_units, push_forward_field, transversality_report

z = ("x", "y", "z")
order = 6


def two_monomials(a1, a2):
    units = (Jet(parse_polynomial("1 + z", z), order), Jet.one(z, order))
    return MonomialSystem(Chart.root(z), (a1, a2, 0), ((1, 1, 0),), units,
                          (ConstantFactor(), ConstantFactor()), ("H", "f"))


system = two_monomials(2, 1)
change, _ = eliminate_units(system)
for v in z:
    print(f"{v}~ = {v} * ({change.factor(v)})")

field = generator_field(system.rows)
pushed = push_forward_field(field, change)
print("pushed field coefficients:", [str(c) for c in pushed.coefficients])
print("kills H and f:", [pushed.annihilates(g, u) for g, u in zip(system.rows, system.units)])
print(transversality_report(pushed, "z")["detail"])

# Two candidate substitutions x~ = x (1+z)^p, y~ = y (1+z)^q.
a1, a2 = 2, 1
same = {"x": Fraction(1, a1 + a2), "y": Fraction(1, a1 + a2)}
opposite = {"x": Fraction(1, a1 - a2), "y": Fraction(-1, a1 - a2)}
print("p = q = 1/(a1+a2):", check_substitution(system, same))
print("p = -q = 1/(a1-a2):", check_substitution(system, opposite))

# With a1 = a2 the exponent matrix drops rank and no such change exists.
try:
    eliminate_units(two_monomials(1, 1))
except NonGeneric as exc:
    print("a1 = a2:", exc)
