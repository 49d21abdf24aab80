"""Exact Haar-state evaluation on the quantized coordinate rings O(M_q(n))
and O(SL_q(n)), with a complete symbolic engine for n = 3."""

__version__ = "0.1.0"

from .qfield import IntPoly, RationalFunction, parse_rational, q2_factorial, q2_int

__all__ = [
    "IntPoly", "RationalFunction", "parse_rational", "q2_factorial", "q2_int",
    "__version__",
]
