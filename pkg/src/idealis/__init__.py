"""Exact arithmetic, Groebner bases, line arrangements and the symbolic-power
containment machinery around two 31-line simplicial arrangements."""

__version__ = "0.1.0"

from .field import (  # noqa: F401
    PrimeField,
    QQ,
    QuadraticField,
    RationalField,
    field_from_descriptor,
    rational,
    sqrt_in_prime_field,
)
from .monomial import Block, Degrevlex, Lex  # noqa: F401
from .poly import Polynomial, Ring  # noqa: F401
