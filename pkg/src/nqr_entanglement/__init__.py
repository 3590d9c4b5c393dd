"""Thermal entanglement of a spin-3/2 quadrupolar nucleus in a magnetic field."""

__version__ = "0.1.0"
