"""Exception types shared across the library.

Every precondition failure raises a subclass of :class:`UpbookError`, so
callers (and the CLI) can distinguish bad input from internal bugs:
:class:`InternalInvariantError` is reserved for "should never happen"
states and maps to a distinct process exit code.
"""


class UpbookError(Exception):
    """Base class for all library errors."""


# graph construction / recognition

class CycleDetected(UpbookError):
    def __init__(self, cycle):
        self.cycle = list(cycle)
        super().__init__(f"directed cycle: {' -> '.join(self.cycle)}")


class DuplicateEdge(UpbookError):
    pass


class UnknownVertex(UpbookError):
    pass


class Disconnected(UpbookError):
    pass


class NotOuterplanar(UpbookError):
    def __init__(self, message, witness=None):
        self.witness = witness or []
        super().__init__(message)


class NotBiconnected(UpbookError):
    pass


class MultiSourceSink(UpbookError):
    pass


class NotCactus(UpbookError):
    pass


class NotOuterpath(UpbookError):
    pass


class NotTriangulated(UpbookError):
    pass


class BlockNotStDag(UpbookError):
    pass


class BimodalityViolation(UpbookError):
    pass


# ordering algebra

class OverlappingSupports(UpbookError):
    pass


class VertexAbsent(UpbookError):
    pass


class PreconditionViolated(UpbookError):
    pass


class DomainMismatch(UpbookError):
    pass


# embedders

class NotOneSided(UpbookError):
    pass


class NotFan(UpbookError):
    pass


class EdgeIsSt(UpbookError):
    pass


class NotStOuterpath(UpbookError):
    pass


class NotPrimary(UpbookError):
    pass


class IneligibleEdge(UpbookError):
    pass


class AttachEdgeConflict(UpbookError):
    pass


class AnchorNotSourceOrSink(UpbookError):
    pass


# exact search / parameterized

class NotTopological(UpbookError):
    pass


class ExceedsBound(UpbookError):
    pass


class ResourceLimit(UpbookError):
    pass


class NoPageEquivalentTriple(UpbookError):
    pass


class InvalidK(UpbookError):
    pass


# generators

class InfeasibleSpec(UpbookError):
    pass


class TooLarge(UpbookError):
    pass


class InternalInvariantError(UpbookError):
    """An invariant the construction is supposed to guarantee was violated."""
