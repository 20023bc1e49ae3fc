"""Exact diameters of polynomial-generated Cayley graphs over finite fields.

The graph on F_{q^n}^* has an edge u -> v whenever u/v = g(alpha) for a monic
degree-d power g of an irreducible over F_q, with alpha a root of the defining
modulus. Modules:

``ff_core``   base-field and extension arithmetic, irreducibility
``poly_enum`` irreducibles and prime powers of a fixed degree
``cayley``    generator sets, BFS diameters, the brute-force oracle
``charsum``   multiplicative characters, character-sum and counting checks
``bounds``    closed-form diameter bounds and their preconditions
``cli``       the ``polydiam`` command
"""
from .bounds import compare, evaluate_bounds
from .cayley import bfs_from_identity, build_generators, diameter
from .errors import ConsistencyError, DomainError, PolydiamError, PreconditionError, ResourceError
from .ff_core import FieldContext, FieldParams, FqPoly
from .poly_enum import build_catalog

__version__ = "0.1.0"

__all__ = [
    "ConsistencyError",
    "DomainError",
    "FieldContext",
    "FieldParams",
    "FqPoly",
    "PolydiamError",
    "PreconditionError",
    "ResourceError",
    "bfs_from_identity",
    "build_catalog",
    "build_generators",
    "compare",
    "diameter",
    "evaluate_bounds",
]
