"""Bratteli diagrams, their realized symmetric-group limits, and
discreteness criteria for piecewise full groups on the Cantor set."""

__version__ = "0.1.0"

from .diagram import BratteliDiagram
