"""Monomialization of Darboux-type foliations by chart-wise blow-ups.

The pipeline goes foliation -> blowup/monomialize -> resonance -> unitelim,
all in exact rational arithmetic with power series truncated at a fixed order.
"""
from .polyring import Jet, Polynomial, parse_polynomial

__version__ = "0.1.0"

__all__ = ["Jet", "Polynomial", "parse_polynomial"]
