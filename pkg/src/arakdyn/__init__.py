"""Symbolic-dynamics models of fibers of arithmetic surfaces."""

__version__ = "0.1.0"
