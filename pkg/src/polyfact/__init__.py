"""Factorial-like values of binary forms: prime eligibility, exact quadratic
representation, factorial profiles, Bhargava factorials and desk-scale searches."""

from .arith import factorize, is_prime, kronecker
from .formclass import BinaryForm, Unsupported, parse_form
from .genfact import FactorizationVector, HSeq, PiK
from .quadrep import QuadForm, representable_bruteforce, representable_criterion

__version__ = "0.1.0"

__all__ = [
    "BinaryForm",
    "FactorizationVector",
    "HSeq",
    "PiK",
    "QuadForm",
    "Unsupported",
    "factorize",
    "is_prime",
    "kronecker",
    "parse_form",
    "representable_bruteforce",
    "representable_criterion",
]
