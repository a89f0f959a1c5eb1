"""Structural validation of logical and physical circuits."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .instructions import LOGICAL_GATES, GateKind, Instruction
from .topology import NodeTopology, QubitRef


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    index: Optional[int] = None

    def __str__(self) -> str:
        where = f"instruction {self.index}: " if self.index is not None else ""
        return f"{where}{self.code}: {self.message}"


def validate_instructions(
    instrs: Sequence[Instruction],
    topology: Optional[NodeTopology] = None,
    qubit_count: Optional[int] = None,
    classical_bit_count: Optional[int] = None,
    logical: bool = False,
) -> list[Violation]:
    """Collect every violation in an instruction sequence.

    Args:
        instrs: Instructions in program order.
        topology: Bounds for physical operands.
        qubit_count: Bound for logical operands.
        classical_bit_count: Bound for written and read bits.
        logical: Also enforce the logical gate subset and forbid conditions.

    Returns:
        Violations in instruction order; empty when the circuit is valid.
    """
    found: list[Violation] = []
    written: set[int] = set()

    def flag(code: str, message: str, index: int) -> None:
        found.append(Violation(code, message, index))

    for index, ins in enumerate(instrs):
        arity = ins.kind.arity
        if arity is not None and len(ins.operands) != arity:
            flag("arity", f"{ins.kind.value} takes {arity} operands, got {len(ins.operands)}", index)
        if len(set(ins.operands)) != len(ins.operands):
            flag("duplicate operand", f"operands of '{ins}' are not distinct", index)
        if len(ins.params) != ins.kind.param_count:
            flag("params", f"{ins.kind.value} takes {ins.kind.param_count} parameters", index)

        for q in ins.operands:
            if isinstance(q, QubitRef):
                if logical:
                    flag("physical operand", f"logical circuit addresses physical qubit {q}", index)
                elif topology is not None and not topology.contains(q):
                    flag("qubit out of range", f"{q} is outside the topology", index)
            elif qubit_count is not None and not 0 <= q < qubit_count:
                flag("qubit out of range", f"logical qubit {q} >= {qubit_count}", index)

        if ins.kind is GateKind.EPR and len(ins.operands) == 2:
            a, b = ins.operands
            if not (isinstance(a, QubitRef) and isinstance(b, QubitRef) and a.is_comm and b.is_comm):
                flag("epr operands", "EPR needs two communication qubits", index)
            elif a.node == b.node:
                flag("epr operands", f"EPR endpoints share node {a.node}", index)

        if ins.kind.is_measurement and ins.writes is None:
            flag("measurement bit", "measurement writes no classical bit", index)
        if not ins.kind.is_measurement and ins.writes is not None:
            flag("measurement bit", f"{ins.kind.value} cannot write a classical bit", index)

        for bit in sorted(ins.reads):
            if bit not in written:
                flag("acausal condition", f"condition reads bit c{bit} before it is written", index)
        bits = set(ins.reads)
        if ins.writes is not None:
            bits.add(ins.writes)
        if classical_bit_count is not None:
            for bit in sorted(bits):
                if not 0 <= bit < classical_bit_count:
                    flag("bit out of range", f"classical bit c{bit} >= {classical_bit_count}", index)

        if logical:
            if ins.kind not in LOGICAL_GATES:
                flag("gate set", f"{ins.kind.value} is not a logical gate", index)
            if ins.condition is not None:
                flag("condition", "logical circuits carry no classical conditions", index)

        if ins.writes is not None:
            written.add(ins.writes)
    return found


def validate(circuit, topology: Optional[NodeTopology] = None) -> list[Violation]:
    """Validate a logical circuit, physical circuit or bare instruction list.

    Logical circuits (anything with ``qubit_count`` and no ``topology``)
    are checked against the logical gate subset; physical circuits against
    their own topology unless one is given.
    """
    if isinstance(circuit, (list, tuple)):
        return validate_instructions(circuit, topology=topology)
    own_topology = getattr(circuit, "topology", None)
    if own_topology is not None or topology is not None:
        return validate_instructions(
            circuit.instructions,
            topology=topology or own_topology,
            classical_bit_count=getattr(circuit, "classical_bit_count", None),
        )
    return validate_instructions(
        circuit.instructions,
        qubit_count=circuit.qubit_count,
        classical_bit_count=circuit.classical_bit_count,
        logical=True,
    )
