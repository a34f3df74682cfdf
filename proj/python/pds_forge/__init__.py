"""Partial difference sets: parameter sieve, nonexistence certificates, exhaustive search."""

from ._core import (
    DomainError,
    StructuralError,
    certify,
    plane,
    replay,
    search,
    sieve,
    verify,
)

__all__ = [
    "DomainError",
    "StructuralError",
    "certify",
    "plane",
    "replay",
    "search",
    "sieve",
    "verify",
]
