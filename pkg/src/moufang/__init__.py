"""Finite Moufang loops: constructions, Sylow subloops and groups with triality."""

__version__ = "0.1.0"

from .loopcore import FiniteLoop, Subloop, from_cayley_table  # noqa: F401
from .construct import chein_double, named_loop, paige_hat, paige_loop  # noqa: F401
