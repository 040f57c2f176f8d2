"""Error taxonomy for holoinv.

Partiality of the holonomy biquandle is a *normal* outcome; operations that
are partial by design return None (or raise Undefined where a caller has
already promised definedness). Everything else here signals either bad input
or a numerically degenerate configuration that the caller may gauge-retry.
"""

from __future__ import annotations


class HoloinvError(Exception):
    """Base class for all errors raised by this package."""

    kind = "Error"

    def payload(self) -> dict:
        return {"kind": self.kind, "message": str(self)}


class ParseError(HoloinvError):
    kind = "ParseError"


# --- diagram engine ---

class WordMismatch(HoloinvError):
    kind = "WordMismatch"


class NotClosed(HoloinvError):
    kind = "NotClosed"


class NoSuchEdge(HoloinvError):
    kind = "NoSuchEdge"


class PatternMismatch(HoloinvError):
    kind = "PatternMismatch"


# --- colorings ---

class InconsistentColoring(HoloinvError):
    kind = "InconsistentColoring"


class ColoringUndefined(HoloinvError):
    """A partial biquandle value needed by a coloring does not exist."""

    kind = "ColoringUndefined"


class Undefined(HoloinvError):
    """A generically-defined map was evaluated outside its domain."""

    kind = "Undefined"


class InvariantViolation(HoloinvError):
    kind = "InvariantViolation"


class OutsideGPrime(HoloinvError):
    """Matrix not in the domain of the factorization chart (m11 = 0)."""

    kind = "OutsideGPrime"


class InternalInconsistency(HoloinvError):
    kind = "InternalInconsistency"


class GaugeExhausted(HoloinvError):
    kind = "GaugeExhausted"


# --- quantum algebra ---

class ChebyshevMismatch(HoloinvError):
    kind = "ChebyshevMismatch"


class NotAdmissible(HoloinvError):
    kind = "NotAdmissible"


class BranchInconsistent(HoloinvError):
    kind = "BranchInconsistent"


class DegenerateSpectrum(HoloinvError):
    kind = "DegenerateSpectrum"


# --- braiding ---

class NullspaceDimension(HoloinvError):
    kind = "NullspaceDimension"

    def __init__(self, dim: int, message: str = ""):
        self.dim = dim
        super().__init__(message or f"nullspace dimension {dim}, expected 1")


class SingularSolution(HoloinvError):
    kind = "SingularSolution"


class BlockIntertwinerDim(HoloinvError):
    kind = "BlockIntertwinerDim"

    def __init__(self, dim: int, message: str = ""):
        self.dim = dim
        super().__init__(message or f"block intertwiner dimension {dim}, expected 1")


class UnresolvableYB(HoloinvError):
    kind = "UnresolvableYB"


class AlphaUndefined(HoloinvError):
    kind = "AlphaUndefined"


# --- invariant ---

class Singular(HoloinvError):
    kind = "Singular"


class UndefinedCrossing(HoloinvError):
    kind = "UndefinedCrossing"


class NonScalarResult(HoloinvError):
    kind = "NonScalarResult"
