"""Exceptions raised by the compiler passes."""

from __future__ import annotations

from typing import Optional


class CompilerError(Exception):
    """Base class for every error raised by the compiler."""


class QasmSyntaxError(CompilerError, ValueError):
    """Malformed OpenQASM input."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class UnsupportedGateError(CompilerError, ValueError):
    """A gate or statement outside the supported OpenQASM subset."""

    def __init__(self, gate: str, line: Optional[int] = None):
        where = f" (line {line})" if line is not None else ""
        super().__init__(f"unsupported gate '{gate}'{where}")
        self.gate = gate
        self.line = line


class RegisterOverflowError(CompilerError, ValueError):
    """A register index beyond the declared register size."""


class ConfigError(CompilerError, ValueError):
    """Configuration file could not be parsed or failed validation."""


class GeneratorError(CompilerError, ValueError):
    """Invalid benchmark generator arguments."""


class AnnotationMissingError(CompilerError):
    """A CNOT reached cost accounting without a group annotation."""


class AtomicityViolationError(CompilerError):
    """A merge group cannot be scheduled as one atomic unit."""


class MalformedBucketError(CompilerError):
    """A bucket violates the post-sweep sharing invariant."""


class LocalGateError(CompilerError):
    """A distributed protocol was requested for co-located operands."""


class NodeCollisionError(CompilerError):
    """Two members of a parallel group live on the same node."""


class ResourceError(CompilerError):
    """No free memory slot is available for a protocol buffer."""


class PlacementError(CompilerError):
    """Placement does not fit the topology or misses a logical qubit."""


class SimulationError(CompilerError):
    """The simulator cannot evaluate the circuit."""


class InvariantViolation(CompilerError):
    """An internal invariant of the pipeline was broken."""

    def __init__(self, invariant: str, detail: str = ""):
        message = f"invariant '{invariant}' violated"
        if detail:
            message += f": {detail}"
        super().__init__(message)
        self.invariant = invariant
