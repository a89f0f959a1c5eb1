"""Gate kinds, classical conditions and the Instruction record."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Optional, Union

from .topology import QubitRef

# Logical circuits address qubits by index, physical circuits by QubitRef.
Qubit = Union[int, QubitRef]


class GateKind(str, Enum):
    """Physical gate set; the logical subset is LOGICAL_GATES."""

    H = "h"
    X = "x"
    Y = "y"
    Z = "z"
    S = "s"
    SDG = "sdg"
    T = "t"
    TDG = "tdg"
    RZ = "rz"
    RX = "rx"
    RY = "ry"
    CNOT = "cx"
    CZ = "cz"
    SWAP = "swap"
    MEASURE_Z = "measz"
    MEASURE_X = "measx"
    RESET = "reset"
    EPR = "epr"
    BARRIER = "barrier"

    @property
    def arity(self) -> Optional[int]:
        """Operand count, or None for BARRIER (any number)."""
        if self is GateKind.BARRIER:
            return None
        if self in TWO_QUBIT_GATES:
            return 2
        return 1

    @property
    def param_count(self) -> int:
        return 1 if self in ROTATIONS else 0

    @property
    def is_measurement(self) -> bool:
        return self in (GateKind.MEASURE_Z, GateKind.MEASURE_X)


TWO_QUBIT_GATES = frozenset({GateKind.CNOT, GateKind.CZ, GateKind.SWAP, GateKind.EPR})
ROTATIONS = frozenset({GateKind.RZ, GateKind.RX, GateKind.RY})
SINGLE_QUBIT_UNITARIES = frozenset({
    GateKind.H, GateKind.X, GateKind.Y, GateKind.Z, GateKind.S, GateKind.SDG,
    GateKind.T, GateKind.TDG, GateKind.RZ, GateKind.RX, GateKind.RY,
})
LOGICAL_GATES = SINGLE_QUBIT_UNITARIES | {
    GateKind.CNOT, GateKind.CZ, GateKind.MEASURE_Z, GateKind.BARRIER,
}
# Single-qubit gates that commute with a CNOT when acting on its control.
CONTROL_COMMUTING = frozenset({
    GateKind.Z, GateKind.S, GateKind.SDG, GateKind.T, GateKind.TDG, GateKind.RZ,
})
# Single-qubit gates that commute with a CNOT when acting on its target.
TARGET_COMMUTING = frozenset({GateKind.X, GateKind.RX})


@dataclass(frozen=True)
class Condition:
    """Feed-forward condition: apply iff XOR of ``bits`` equals ``parity``."""

    bits: frozenset[int]
    parity: int = 1

    def __post_init__(self) -> None:
        if self.parity not in (0, 1):
            raise ValueError(f"parity must be 0 or 1, got {self.parity}")
        if not self.bits:
            raise ValueError("condition needs at least one classical bit")

    @classmethod
    def on(cls, bits: Iterable[int], parity: int = 1) -> "Condition":
        return cls(frozenset(bits), parity)

    def holds(self, values: dict[int, int]) -> bool:
        acc = 0
        for bit in self.bits:
            acc ^= values[bit]
        return acc == self.parity


@dataclass(frozen=True)
class Instruction:
    """One gate, measurement or entanglement primitive.

    ``uid`` is the program-order identity used by merge groups; -1 means
    not yet numbered.
    """

    kind: GateKind
    operands: tuple[Qubit, ...]
    params: tuple[float, ...] = ()
    writes: Optional[int] = None
    condition: Optional[Condition] = None
    uid: int = field(default=-1)

    @property
    def control(self) -> Qubit:
        return self.operands[0]

    @property
    def target(self) -> Qubit:
        return self.operands[1]

    @property
    def is_cnot(self) -> bool:
        return self.kind is GateKind.CNOT

    @property
    def reads(self) -> frozenset[int]:
        return self.condition.bits if self.condition is not None else frozenset()

    def with_uid(self, uid: int) -> "Instruction":
        return Instruction(self.kind, self.operands, self.params, self.writes, self.condition, uid)

    def __str__(self) -> str:
        name = self.kind.value
        if self.params:
            name += "(" + ",".join(f"{p:g}" for p in self.params) + ")"
        text = f"{name} " + " ".join(str(q) for q in self.operands)
        if self.writes is not None:
            text += f" -> c{self.writes}"
        if self.condition is not None:
            bits = ",".join(f"c{b}" for b in sorted(self.condition.bits))
            text += f" ?parity({bits})={self.condition.parity}"
        return text


def qubits_of(instr: Instruction) -> frozenset[Qubit]:
    """Operand qubits of an instruction."""
    return frozenset(instr.operands)


# Convenience constructors, mostly for generators and tests.

def gate(kind: GateKind, *operands: Qubit, params: tuple[float, ...] = ()) -> Instruction:
    return Instruction(kind, tuple(operands), tuple(params))


def cnot(control: Qubit, target: Qubit) -> Instruction:
    return Instruction(GateKind.CNOT, (control, target))


def measure(qubit: Qubit, bit: int, basis: GateKind = GateKind.MEASURE_Z) -> Instruction:
    return Instruction(basis, (qubit,), writes=bit)


def conditioned(kind: GateKind, qubit: Qubit, bits: Iterable[int], parity: int = 1) -> Instruction:
    return Instruction(kind, (qubit,), condition=Condition.on(bits, parity))
