"""Exact decision procedures for integral solvability of binary quadratic
and norm-form equations, with brute-force and Pell-reduction oracles."""

from .decision import Certificate, Decision, Status
from .errors import DiophantusError

__version__ = "0.1.0"

__all__ = ["Certificate", "Decision", "DiophantusError", "Status", "__version__"]
