"""q-Kreweras, q-Narayana and cyclic sieving verification for Weyl groups."""

from qsieve.qpoly import QPoly, CycloElt, DivisionNotExact

__all__ = ["QPoly", "CycloElt", "DivisionNotExact"]
__version__ = "0.1.0"
