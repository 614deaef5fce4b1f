"""Isomorphism testing for graphs excluding K_{3,h} as a minor."""

from .errors import (DecompositionError, DomainError, FormatError, InstanceTooLarge,
                     MinorEvidence, PreconditionError)
from .graph import ColoredGraph, is_isomorphism

__all__ = [
    "ColoredGraph",
    "is_isomorphism",
    "DecompositionError",
    "DomainError",
    "FormatError",
    "InstanceTooLarge",
    "MinorEvidence",
    "PreconditionError",
]
