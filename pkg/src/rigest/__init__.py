"""Simulation and moment-based parameter estimation for binomial random intersection graphs."""

__version__ = "0.1.0"
