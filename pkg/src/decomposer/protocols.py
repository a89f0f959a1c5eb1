"""Teleportation-based distributed gate protocols and GHZ preparation.

Every protocol emits instructions over physical qubits. Memory qubits
come from the placement; each node's single communication qubit is
``QubitRef.comm(node)``. Classical bits are drawn from a ``BitAllocator``
so that protocol outcomes never collide with logical measurement bits.
"""

import logging
from typing import Optional, Sequence

from circuit_ir import (
    Condition,
    GateKind,
    Instruction,
    LocalGateError,
    NodeCollisionError,
    Placement,
    QubitRef,
    ResourceError,
)

from .physical import BitAllocator

logger = logging.getLogger(__name__)


def _op(kind: GateKind, *operands: QubitRef) -> Instruction:
    return Instruction(kind, tuple(operands))


def _measure(kind: GateKind, qubit: QubitRef, bit: int) -> Instruction:
    return Instruction(kind, (qubit,), writes=bit)


def _if(kind: GateKind, qubit: QubitRef, bits: Sequence[int]) -> Instruction:
    return Instruction(kind, (qubit,), condition=Condition.on(bits, 1))


def _teleported_gate(
    kind: GateKind,
    control: int,
    target: int,
    placement: Placement,
    bits: Optional[BitAllocator],
) -> list[Instruction]:
    bits = bits or BitAllocator()
    mc, mt = placement[control], placement[target]
    if mc.node == mt.node:
        raise LocalGateError(f"operands {control} and {target} share node {mc.node}")
    ea, eb = QubitRef.comm(mc.node), QubitRef.comm(mt.node)
    m1, m2 = bits(), bits()
    return [
        _op(GateKind.EPR, ea, eb),
        _op(GateKind.CNOT, mc, ea),
        _measure(GateKind.MEASURE_Z, ea, m1),
        _if(GateKind.X, eb, [m1]),
        _op(kind, eb, mt),
        _measure(GateKind.MEASURE_X, eb, m2),
        _if(GateKind.Z, mc, [m2]),
        _op(GateKind.RESET, ea),
        _op(GateKind.RESET, eb),
    ]


def decompose_naive_cnot(
    g: Instruction,
    placement: Placement,
    bits: Optional[BitAllocator] = None,
) -> list[Instruction]:
    """Teleported CNOT: one EPR pair, two measurements, two corrections.

    Raises:
        LocalGateError: control and target are placed on the same node.
    """
    return _teleported_gate(GateKind.CNOT, g.control, g.target, placement, bits)


def decompose_naive_cz(
    g: Instruction,
    placement: Placement,
    bits: Optional[BitAllocator] = None,
) -> list[Instruction]:
    """Teleported CZ, same shape as the CNOT protocol with CZ as the remote gate."""
    return _teleported_gate(GateKind.CZ, g.operands[0], g.operands[1], placement, bits)


def build_ghz(
    nodes: Sequence[int],
    root_buffer: Optional[QubitRef],
    bits: Optional[BitAllocator] = None,
) -> list[Instruction]:
    """Prepare the k-party GHZ state on the communication qubits of ``nodes``.

    Star fusion around ``nodes[0]``: the first Bell half is parked in the
    root buffer, each further Bell pair is fused into it with a CNOT and a
    Z measurement, and the buffer is finally swapped back.

    Raises:
        ValueError: fewer than two nodes, or repeated nodes.
        ResourceError: k > 2 and no buffer slot on the root node.
    """
    if len(nodes) < 2:
        raise ValueError(f"GHZ preparation needs at least 2 nodes, got {len(nodes)}")
    if len(set(nodes)) != len(nodes):
        raise ValueError(f"GHZ nodes must be distinct, got {list(nodes)}")
    comms = [QubitRef.comm(node) for node in nodes]
    if len(nodes) == 2:
        return [_op(GateKind.EPR, comms[0], comms[1])]
    if root_buffer is None:
        raise ResourceError(f"no free memory slot on root node {nodes[0]} for GHZ fusion")
    if root_buffer.node != nodes[0] or root_buffer.is_comm:
        raise ValueError(f"buffer {root_buffer} is not a memory qubit on node {nodes[0]}")

    bits = bits or BitAllocator()
    root = comms[0]
    out = [
        _op(GateKind.EPR, root, comms[1]),
        _op(GateKind.SWAP, root, root_buffer),
    ]
    for leaf in comms[2:]:
        m = bits()
        out += [
            _op(GateKind.EPR, root, leaf),
            _op(GateKind.CNOT, root_buffer, root),
            _measure(GateKind.MEASURE_Z, root, m),
            _if(GateKind.X, leaf, [m]),
            _op(GateKind.RESET, root),
        ]
    out.append(_op(GateKind.SWAP, root_buffer, root))
    return out


def _fan_nodes(pivot: QubitRef, partners: Sequence[QubitRef]) -> list[int]:
    nodes = [pivot.node]
    for ref in partners:
        if ref.node in nodes:
            raise NodeCollisionError(f"{ref} shares node {ref.node} with another group member")
        nodes.append(ref.node)
    return nodes


def _cat_entangle(pivot: QubitRef, comms: list[QubitRef], bits: BitAllocator) -> list[Instruction]:
    """Copy the pivot's Z value onto the leaf electrons of a prepared GHZ state."""
    m = bits()
    out = [
        _op(GateKind.CNOT, pivot, comms[0]),
        _measure(GateKind.MEASURE_Z, comms[0], m),
    ]
    out += [_if(GateKind.X, leaf, [m]) for leaf in comms[1:]]
    out.append(_op(GateKind.RESET, comms[0]))
    return out


def _cat_disentangle(pivot: QubitRef, leaves: list[QubitRef], bits: BitAllocator) -> list[Instruction]:
    """X-measure the leaf copies and fix the pivot's phase on their parity."""
    outcomes = [bits() for _ in leaves]
    out = [_measure(GateKind.MEASURE_X, leaf, m) for leaf, m in zip(leaves, outcomes)]
    out.append(_if(GateKind.Z, pivot, outcomes))
    out += [_op(GateKind.RESET, leaf) for leaf in leaves]
    return out


def decompose_shared_control(
    members: Sequence[Instruction],
    placement: Placement,
    root_buffer: Optional[QubitRef],
    bits: Optional[BitAllocator] = None,
) -> list[Instruction]:
    """Fan-out of one control to n remote targets over a shared GHZ state.

    Raises:
        ValueError: fewer than two members or members with different controls.
        NodeCollisionError: two operands share a node.
    """
    if len(members) < 2:
        raise ValueError("shared-control construction needs at least 2 CNOTs")
    controls = {g.control for g in members}
    if len(controls) != 1:
        raise ValueError(f"members do not share a control: {sorted(controls)}")
    bits = bits or BitAllocator()
    mc = placement[members[0].control]
    targets = [placement[g.target] for g in members]
    comms = [QubitRef.comm(node) for node in _fan_nodes(mc, targets)]

    out = build_ghz([e.node for e in comms], root_buffer, bits)
    out += _cat_entangle(mc, comms, bits)
    out += [_op(GateKind.CNOT, e, t) for e, t in zip(comms[1:], targets)]
    out += _cat_disentangle(mc, comms[1:], bits)
    return out


def decompose_shared_target(
    members: Sequence[Instruction],
    placement: Placement,
    root_buffer: Optional[QubitRef],
    bits: Optional[BitAllocator] = None,
) -> list[Instruction]:
    """Fan-in of n remote controls onto one target as H-conjugated CZs.

    Raises:
        ValueError: fewer than two members or members with different targets.
        NodeCollisionError: two operands share a node.
    """
    if len(members) < 2:
        raise ValueError("shared-target construction needs at least 2 CNOTs")
    target_set = {g.target for g in members}
    if len(target_set) != 1:
        raise ValueError(f"members do not share a target: {sorted(target_set)}")
    bits = bits or BitAllocator()
    mt = placement[members[0].target]
    controls = [placement[g.control] for g in members]
    comms = [QubitRef.comm(node) for node in _fan_nodes(mt, controls)]

    out = [_op(GateKind.H, mt)]
    out += build_ghz([e.node for e in comms], root_buffer, bits)
    out += _cat_entangle(mt, comms, bits)
    out += [_op(GateKind.CZ, c, e) for c, e in zip(controls, comms[1:])]
    out += _cat_disentangle(mt, comms[1:], bits)
    out.append(_op(GateKind.H, mt))
    return out
