"""Exact and interval arithmetic tools for certifying the binary entropy
inequality ``alpha_q H(x^q) >= x^(q-1) H(x)`` at rational exponents ``q = k/r``."""

__version__ = "0.1.0"

from .alpha import AlphaAlgebraic, alpha_new, alpha_refine
from .certify import Certificate, build_p, verify_exponent
from .combinatorics import h_coeff, h_poly
from .exact import Interval, interval_entropy, interval_log

__all__ = [
    "AlphaAlgebraic",
    "Certificate",
    "Interval",
    "alpha_new",
    "alpha_refine",
    "build_p",
    "h_coeff",
    "h_poly",
    "interval_entropy",
    "interval_log",
    "verify_exponent",
]
