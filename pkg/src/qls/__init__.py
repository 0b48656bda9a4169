"""Simulation and design toolkit for quantum-logic spectroscopy of trapped atomic-molecular ion pairs."""
__version__ = "0.1.0"
