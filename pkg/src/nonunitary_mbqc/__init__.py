"""Simulation and verification of nonunitary MBQC gates."""

__version__ = "0.1.0"
