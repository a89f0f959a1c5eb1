"""Logical circuits over integer qubit indices."""

from dataclasses import dataclass
from typing import Optional, Sequence

from circuit_ir import Instruction, Violation, validate


@dataclass(frozen=True)
class LogicalCircuit:
    """Pre-decomposition circuit on logical qubits ``0..qubit_count-1``.

    Instructions are renumbered on construction so that ``uid`` equals the
    program position. ``classical_bit_count`` defaults to one past the
    highest written bit.
    """

    qubit_count: int
    instructions: tuple[Instruction, ...] = ()
    name: str = "circuit"
    classical_bit_count: Optional[int] = None

    def __post_init__(self) -> None:
        numbered = tuple(ins.with_uid(i) for i, ins in enumerate(self.instructions))
        object.__setattr__(self, "instructions", numbered)
        if self.classical_bit_count is None:
            written = [ins.writes for ins in numbered if ins.writes is not None]
            object.__setattr__(self, "classical_bit_count", max(written) + 1 if written else 0)

    @classmethod
    def of(cls, qubit_count: int, instructions: Sequence[Instruction], name: str = "circuit") -> "LogicalCircuit":
        return cls(qubit_count, tuple(instructions), name)

    def __len__(self) -> int:
        return len(self.instructions)

    @property
    def cnot_count(self) -> int:
        return sum(1 for ins in self.instructions if ins.is_cnot)

    def violations(self) -> list[Violation]:
        return validate(self)
