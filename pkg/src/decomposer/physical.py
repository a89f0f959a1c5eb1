"""Physical circuits, emitted blocks and structural checks."""

import itertools
from dataclasses import dataclass, field
from typing import Optional, Sequence

from circuit_ir import (
    GateKind,
    Instruction,
    InvariantViolation,
    NodeTopology,
    Placement,
    QubitRef,
    depth_layers,
)


class BitAllocator:
    """Hands out fresh classical bit ids starting after the logical bits."""

    def __init__(self, start: int = 0):
        self._counter = itertools.count(start)
        self.next_free = start

    def __call__(self) -> int:
        bit = next(self._counter)
        self.next_free = bit + 1
        return bit


@dataclass(frozen=True)
class Block:
    """One emitted construct: its label, instruction range and weighted cost."""

    label: str
    start: int
    stop: int
    weighted_cost: int
    epr_count: int = 0
    parallel: bool = False

    def __len__(self) -> int:
        return self.stop - self.start


@dataclass(frozen=True)
class PhysicalCircuit:
    """Instructions over physical qubits, with block annotations."""

    topology: NodeTopology
    placement: Placement
    instructions: tuple[Instruction, ...]
    classical_bit_count: int
    logical_bit_count: int = 0
    blocks: tuple[Block, ...] = ()
    name: str = "circuit"
    logical_qubit_count: Optional[int] = field(default=None)

    def __len__(self) -> int:
        return len(self.instructions)

    @property
    def epr_count(self) -> int:
        return sum(1 for ins in self.instructions if ins.kind is GateKind.EPR)

    @property
    def parallel_block_count(self) -> int:
        return sum(1 for block in self.blocks if block.parallel)

    def depth(self) -> int:
        """Structural layer depth."""
        return depth_layers(self.instructions)


def check_electron_hygiene(instrs: Sequence[Instruction]) -> None:
    """Raise InvariantViolation unless every communication qubit is reset before reuse.

    An EPR half makes a qubit dirty, RESET makes it clean and SWAP
    exchanges the states of its operands. Every communication qubit must
    be clean when an EPR targets it and at the end of the circuit.
    """
    dirty: set[QubitRef] = set()
    for pos, ins in enumerate(instrs):
        if ins.kind is GateKind.EPR:
            stale = [q for q in ins.operands if q in dirty]
            if stale:
                raise InvariantViolation(
                    "communication qubit reset before reuse",
                    f"instruction {pos} '{ins}' reuses {', '.join(map(str, stale))}",
                )
            dirty.update(ins.operands)
        elif ins.kind is GateKind.RESET:
            dirty.discard(ins.operands[0])
        elif ins.kind is GateKind.SWAP:
            a, b = ins.operands
            a_dirty, b_dirty = a in dirty, b in dirty
            dirty.discard(a)
            dirty.discard(b)
            if a_dirty:
                dirty.add(b)
            if b_dirty:
                dirty.add(a)
    leftover = sorted(q for q in dirty if q.is_comm)
    if leftover:
        raise InvariantViolation(
            "communication qubit reset before reuse",
            f"{', '.join(map(str, leftover))} not reset at the end of the circuit",
        )


def check_no_remote_gates(instrs: Sequence[Instruction]) -> None:
    """Raise InvariantViolation if a two-qubit gate other than EPR spans nodes."""
    for pos, ins in enumerate(instrs):
        if ins.kind in (GateKind.CNOT, GateKind.CZ, GateKind.SWAP):
            a, b = ins.operands
            if a.node != b.node:
                raise InvariantViolation("no inter-node gates", f"instruction {pos} '{ins}' spans nodes")
