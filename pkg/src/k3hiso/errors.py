"""Exception types shared across the package."""


class FormatError(ValueError):
    """Malformed graph file. ``offset`` is the byte (or line) position of the fault."""

    def __init__(self, message, offset=None):
        self.offset = offset
        if offset is not None:
            message = f"{message} (at offset {offset})"
        super().__init__(message)


class DomainError(ValueError):
    """An argument lies outside the domain an operation accepts."""


class PreconditionError(ValueError):
    """An input violates a documented precondition (e.g. not 3-connected)."""


class InstanceTooLarge(ValueError):
    """Brute-force routine refused an instance above its size cap."""


class DecompositionError(RuntimeError):
    """The decomposition builder could not reach a valid fixpoint."""


class MinorEvidence(Exception):
    """Structured signal that the input cannot exclude K_{3,h} as a minor.

    Raised when a bound that holds for every K_{3,h}-minor-free graph is violated.
    ``kind`` names the violated bound, ``vertices`` is the offending vertex set.
    """

    def __init__(self, kind, h, vertices=(), detail="", witness=None):
        self.kind = kind
        self.h = h
        self.vertices = tuple(sorted(vertices))
        self.detail = detail
        self.witness = witness
        super().__init__(f"{kind} bound violated for h={h}: {detail}".rstrip(": "))

    def to_dict(self):
        out = {"kind": self.kind, "h": self.h, "vertices": list(self.vertices)}
        if self.detail:
            out["detail"] = self.detail
        if self.witness is not None:
            out["witness"] = self.witness.to_dict()
        return out


class GeneratorError(RuntimeError):
    """An instance generator ran out of retries."""
