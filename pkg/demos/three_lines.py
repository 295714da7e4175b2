"""
Resolving three lines through a moving point
============================================

H = (x - eps)^a1 (x - y)^a2 (x + y)^a3 is a first integral of a foliation
in (x, y, eps). For eps != 0 the three lines meet pairwise at distinct
points; at eps = 0 they all pass through the origin. A few blow-ups turn
H and eps into monomials times units in every chart.
"""

from darbouxmono.foliation import DarbouxIntegral, darboux_one_form, wedge_system
from darbouxmono.monomialize import Strategy, monomialize_all, verify_system
from darbouxmono.resonance import generator_field, is_resonant, matrix_rank

roster = ("x", "y", "eps")
h = DarbouxIntegral.parse(roster, [("x - eps", 2), ("x - y", 3), ("x + y", 5)])

# The defining one-form, with the integrating factor divided out.
omega = darboux_one_form(h)
print(omega)
w = wedge_system(omega)
print("q1 =", w.q1)
print("q2 =", w.q2)

# Blow up the origin, then the two points still singular in the new charts.
strategy = Strategy.manual([
    ("root", ("x", "y", "eps"), {"x": "u", "y": "v"}),
    ("root/0:eps", ("u", "v")),
    ("root/0:y", ("u", "eps")),
])
result = monomialize_all(h, strategy)

for system in result.systems:
    checks = verify_system(system, h)
    print()
    print(system.chart.id, "map:", system.chart.map_strings())
    print("  gamma0 =", [str(g) for g in system.gamma0], " gamma1 =", [str(g) for g in system.gammas[0]])
    print("  unit of H =", system.units[0])
    print("  rank", matrix_rank(system.rows), "resonant", is_resonant(system.gamma0, system.gammas))
    print("  log-linear field", generator_field(system.rows))
    print("  all checks passed:", all(checks.values()))
