"""Text formats: the physical-circuit listing and OpenQASM export."""

import re
from typing import Optional

from circuit_ir import (
    Condition,
    GateKind,
    Instruction,
    NodeTopology,
    Placement,
    QasmSyntaxError,
    QubitRef,
    Role,
)
from decomposer import PhysicalCircuit
from frontend import LogicalCircuit

_QUBIT = re.compile(r"n(\d+)\.([em])(\d+)")
_LINE = re.compile(
    r"(?P<gate>[a-z]+)(?:\((?P<params>[^)]*)\))?"
    r"(?P<operands>(?:\s+n\d+\.[em]\d+)*)"
    r"(?:\s+->\s+c(?P<writes>\d+))?"
    r"(?:\s+\?parity\((?P<bits>c\d+(?:,c\d+)*)\)=(?P<parity>[01]))?\s*$"
)


def _number(value: float) -> str:
    return format(value, ".17g")


def format_instruction(ins: Instruction) -> str:
    """One listing line: ``<gate>[(params)] <operands> [-> cK] [?parity(...)=P]``."""
    name = ins.kind.value
    if ins.params:
        name += "(" + ",".join(_number(p) for p in ins.params) + ")"
    parts = [name, *(str(q) for q in ins.operands)]
    if ins.writes is not None:
        parts += ["->", f"c{ins.writes}"]
    if ins.condition is not None:
        bits = ",".join(f"c{b}" for b in sorted(ins.condition.bits))
        parts.append(f"?parity({bits})={ins.condition.parity}")
    return " ".join(parts)


def emit_physical(circuit: PhysicalCircuit) -> str:
    """Render a physical circuit as header lines followed by one instruction per line."""
    slots = " ".join(f"{i}:{ref}" for i, ref in enumerate(circuit.placement.slots))
    lines = [
        f"circuit {circuit.name}",
        f"topology nodes={circuit.topology.node_count} memory={circuit.topology.memory_per_node}",
        f"placement {slots}".rstrip(),
        f"cbits {circuit.classical_bit_count} logical={circuit.logical_bit_count}",
    ]
    lines += [format_instruction(ins) for ins in circuit.instructions]
    return "\n".join(lines) + "\n"


def _qubit(text: str, line: int) -> QubitRef:
    match = _QUBIT.fullmatch(text)
    if match is None:
        raise QasmSyntaxError(f"bad physical qubit '{text}'", line, 1)
    node, role, index = match.groups()
    return QubitRef(int(node), Role(role), int(index))


def _header(lines: list[str], prefix: str, number: int) -> str:
    if number >= len(lines) or not lines[number].startswith(prefix):
        raise QasmSyntaxError(f"expected '{prefix.strip()}' header", number + 1, 1)
    return lines[number][len(prefix):]


def _instruction(text: str, line: int) -> Instruction:
    match = _LINE.match(text.strip())
    if match is None:
        raise QasmSyntaxError(f"cannot parse '{text.strip()}'", line, 1)
    try:
        kind = GateKind(match["gate"])
    except ValueError:
        raise QasmSyntaxError(f"unknown gate '{match['gate']}'", line, 1) from None
    params = tuple(float(p) for p in match["params"].split(",")) if match["params"] else ()
    operands = tuple(_qubit(q, line) for q in match["operands"].split())
    writes: Optional[int] = int(match["writes"]) if match["writes"] is not None else None
    condition = None
    if match["bits"]:
        bits = [int(b[1:]) for b in match["bits"].split(",")]
        condition = Condition.on(bits, int(match["parity"]))
    return Instruction(kind, operands, params, writes, condition)


def read_physical(text: str) -> PhysicalCircuit:
    """Parse the output of ``emit_physical``.

    Raises:
        QasmSyntaxError: A header or instruction line is malformed.
    """
    lines = text.splitlines()
    name = _header(lines, "circuit ", 0)
    topo = dict(item.split("=") for item in _header(lines, "topology ", 1).split())
    slot_text = _header(lines, "placement", 2).split()
    slots = tuple(_qubit(item.split(":", 1)[1], 3) for item in slot_text)
    cbits_text = _header(lines, "cbits ", 3).split()
    logical_bits = int(cbits_text[1].split("=")[1]) if len(cbits_text) > 1 else 0
    instructions = tuple(
        _instruction(line, number)
        for number, line in enumerate(lines[4:], start=5)
        if line.strip()
    )
    return PhysicalCircuit(
        topology=NodeTopology(int(topo["nodes"]), int(topo["memory"])),
        placement=Placement(slots),
        instructions=instructions,
        classical_bit_count=int(cbits_text[0]),
        logical_bit_count=logical_bits,
        name=name,
        logical_qubit_count=len(slots),
    )


def emit_qasm(circuit: LogicalCircuit) -> str:
    """OpenQASM 2.0 text of a logical circuit over single ``q`` and ``c`` registers.

    Raises:
        ValueError: The circuit holds a conditioned or non-logical instruction.
    """
    lines = ["OPENQASM 2.0;", 'include "qelib1.inc";', f"qreg q[{circuit.qubit_count}];"]
    if circuit.classical_bit_count:
        lines.append(f"creg c[{circuit.classical_bit_count}];")
    for ins in circuit.instructions:
        if ins.condition is not None:
            raise ValueError(f"cannot export conditioned instruction '{ins}'")
        args = ",".join(f"q[{q}]" for q in ins.operands)
        if ins.kind is GateKind.MEASURE_Z:
            lines.append(f"measure {args} -> c[{ins.writes}];")
        elif ins.kind is GateKind.BARRIER:
            lines.append(f"barrier {args};")
        elif ins.kind.is_measurement or ins.kind in (GateKind.RESET, GateKind.EPR):
            raise ValueError(f"'{ins.kind.value}' has no logical QASM form")
        elif ins.params:
            params = ",".join(_number(p) for p in ins.params)
            lines.append(f"{ins.kind.value}({params}) {args};")
        else:
            lines.append(f"{ins.kind.value} {args};")
    return "\n".join(lines) + "\n"
