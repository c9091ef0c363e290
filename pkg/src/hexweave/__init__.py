"""Hexagonal aperiodic monotile toolkit: closed-form generator, matching-rule
checker, half-hexagon substitution, deduction solver and parity analytics."""

__version__ = "0.1.0"
