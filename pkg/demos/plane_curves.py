"""
Plane curve singularities by point blow-ups
===========================================

With no parameters the same machinery resolves a plane curve. Blowing up
the origin of every chart where the curve is not yet a monomial times a
unit terminates for the classical examples below.
"""

from darbouxmono.foliation import DarbouxIntegral
from darbouxmono.monomialize import Strategy, StrategyKind, monomialize_all

curves = {
    "cusp": "y^2 - x^3",
    "node": "y^2 - x^2 - x^3",
    "tacnode": "y^2 - x^4",
    "E8": "y^3 - x^5",
    "four lines": "x*y*(x - y)*(x + y)",
}

strategy = Strategy(StrategyKind.AUTO_ORIGIN, max_depth=12)
for name, text in curves.items():
    h = DarbouxIntegral.parse(("x", "y"), [(text, 1)])
    result = monomialize_all(h, strategy, order=4)
    depth = max(s.chart.depth for s in result.systems)
    print(f"{name:10s} {len(result.tree) - len(result.systems):2d} blow-ups, "
          f"{len(result.systems):2d} charts, depth {depth}")
    for s in result.systems:
        print(f"    {s.chart.id:24s} H = {' '.join(f'{v}^{g}' for v, g in zip(s.roster, s.gamma0) if g)} * unit")
