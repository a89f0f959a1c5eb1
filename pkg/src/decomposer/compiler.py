"""Expansion of annotated bucketed circuits into physical circuits."""

import logging
from typing import Optional, Sequence

from circuit_ir import (
    Bucket,
    BucketedCircuit,
    CostModel,
    GateKind,
    GroupKind,
    Instruction,
    MergeGroup,
    Mode,
    NodeTopology,
    Placement,
    PlacementError,
    SINGLE_QUBIT_UNITARIES,
    partition_group,
    placement_nodes,
)

from .grouping import group_bucket
from .physical import (
    BitAllocator,
    Block,
    PhysicalCircuit,
    check_electron_hygiene,
    check_no_remote_gates,
)
from .protocols import (
    decompose_naive_cnot,
    decompose_naive_cz,
    decompose_shared_control,
    decompose_shared_target,
)

logger = logging.getLogger(__name__)


def parallel_threshold(mode: Mode, cost: CostModel) -> Optional[int]:
    """Smallest shared sub-group decomposed in parallel; None disables parallel blocks."""
    if mode is Mode.NAIVE:
        return None
    if mode is Mode.RELAXED:
        return 2
    return max(2, cost.min_group_size_conservative)


def default_layout(qubit_count: int) -> tuple[NodeTopology, Placement]:
    """One logical qubit per node, four memory qubits per node."""
    return NodeTopology(max(1, qubit_count)), Placement.one_per_node(qubit_count)


class _Emitter:
    """Accumulates physical instructions and the block table."""

    def __init__(self, placement: Placement, topology: NodeTopology, cost: CostModel, first_bit: int):
        self.placement = placement
        self.topology = topology
        self.cost = cost
        self.bits = BitAllocator(first_bit)
        self.instructions: list[Instruction] = []
        self.blocks: list[Block] = []

    def block(self, label: str, instrs: Sequence[Instruction], weighted_cost: int, parallel: bool = False) -> None:
        start = len(self.instructions)
        self.instructions.extend(instrs)
        eprs = sum(1 for ins in instrs if ins.kind is GateKind.EPR)
        self.blocks.append(Block(label, start, len(self.instructions), weighted_cost, eprs, parallel))

    def place(self, ins: Instruction) -> Instruction:
        return Instruction(
            ins.kind,
            tuple(self.placement[q] for q in ins.operands),
            ins.params,
            ins.writes,
            ins.condition,
        )

    def passthrough(self, ins: Instruction) -> None:
        self.instructions.append(self.place(ins))

    def local_gate(self, ins: Instruction) -> None:
        self.block(f"local {ins}", [self.place(ins)], 1)

    def naive(self, ins: Instruction) -> None:
        if ins.kind is GateKind.CZ:
            self.block(f"naive {ins}", decompose_naive_cz(ins, self.placement, self.bits), self.cost.naive_cnot_cost)
        else:
            self.block(f"naive {ins}", decompose_naive_cnot(ins, self.placement, self.bits), self.cost.naive_cnot_cost)

    def parallel(self, kind: GroupKind, pivot: int, members: list[Instruction]) -> bool:
        """Emit a parallel block; False when the root node has no buffer slot."""
        root = self.placement.node_of(pivot)
        buffer = self.placement.buffer_for(root, self.topology)
        if buffer is None:
            logger.warning(
                "No free memory slot on node %d for a %d-party GHZ state; decomposing %s group naively",
                root, len(members) + 1, kind.value,
            )
            return False
        build = decompose_shared_control if kind is GroupKind.SHARED_CONTROL else decompose_shared_target
        instrs = build(members, self.placement, buffer, self.bits)
        label = f"{kind.value}({pivot}) x{len(members)}"
        self.block(label, instrs, self.cost.parallel_cost(len(members)), parallel=True)
        return True


def _bucket_groups(bucket: Bucket, override: Optional[Sequence[MergeGroup]]) -> list[MergeGroup]:
    uids = {ins.uid for ins in bucket.instructions}
    if override is not None:
        chosen = [g for g in override if uids.issuperset(g.members)]
        covered = {uid for g in chosen for uid in g.members}
        loose = tuple(ins for ins in bucket.cnots if ins.uid not in covered)
        return chosen + (group_bucket(Bucket(loose)) if loose else [])
    if bucket.joint_groups is not None:
        covered = {uid for g in bucket.joint_groups for uid in g.members}
        loose = tuple(ins for ins in bucket.cnots if ins.uid not in covered)
        return list(bucket.joint_groups) + (group_bucket(Bucket(loose)) if loose else [])
    return group_bucket(bucket)


def compile_circuit(
    bucketed: BucketedCircuit,
    groups: Optional[Sequence[MergeGroup]] = None,
    placement: Optional[Placement] = None,
    topology: Optional[NodeTopology] = None,
    mode: Mode = Mode.CONSERVATIVE,
    cost: Optional[CostModel] = None,
    name: str = "circuit",
) -> PhysicalCircuit:
    """Expand every bucket into physical instructions.

    Single-qubit gates and logical measurements move onto their placed
    memory qubits. Local two-qubit gates are emitted directly. Shared
    sub-groups at least as large as the mode's threshold use the parallel
    constructions; everything else uses the teleported protocols. Groups
    in one bucket are emitted in sorted order, which serializes any that
    contend for a communication qubit.

    Args:
        bucketed: Buckets, optionally annotated with ``joint_groups``.
        groups: Merge groups overriding the bucket annotations.
        placement: Logical to memory qubit map; one qubit per node if None.
        topology: Hardware model; sized to the placement if None.
        mode: Selects the parallel-group threshold.
        cost: Weights recorded on each emitted block.
        name: Circuit name carried to reports.

    Raises:
        PlacementError: placement does not fit the topology or misses a qubit.
        InvariantViolation: the output breaks an electron or locality invariant.
    """
    cost = cost or CostModel()
    if placement is None:
        default_topology, placement = default_layout(bucketed.qubit_count)
        topology = topology or default_topology
    if topology is None:
        topology = NodeTopology(max(1, placement.node_span))
    placement.check_against(topology)
    if bucketed.qubit_count > len(placement):
        raise PlacementError(f"placement covers {len(placement)} of {bucketed.qubit_count} logical qubits")

    threshold = parallel_threshold(mode, cost)
    node_of = placement_nodes(placement)
    out = _Emitter(placement, topology, cost, bucketed.classical_bit_count)

    for bucket in bucketed.buckets:
        for ins in bucket.instructions:
            if ins.is_cnot:
                continue
            if ins.kind in SINGLE_QUBIT_UNITARIES or ins.kind in (GateKind.MEASURE_Z, GateKind.BARRIER):
                out.passthrough(ins)
            elif ins.kind is GateKind.CZ:
                if node_of(ins.operands[0]) == node_of(ins.operands[1]):
                    out.local_gate(ins)
                else:
                    out.naive(ins)
            else:
                raise ValueError(f"cannot compile logical instruction '{ins}'")

        by_uid = bucket.by_uid()
        ordered = sorted(
            _bucket_groups(bucket, groups),
            key=lambda g: min((by_uid[u].control, by_uid[u].target) for u in g.members),
        )
        for group in ordered:
            members = [by_uid[uid] for uid in group.members]
            local, subgroups = partition_group(group, members, node_of)
            for ins in local:
                out.local_gate(ins)
            if group.kind.is_shared and len(subgroups) > 1:
                logger.info("Split %s into %d node-distinct sub-groups", group.describe(), len(subgroups))
            for sub in subgroups:
                if (
                    group.kind.is_shared
                    and threshold is not None
                    and len(sub) >= threshold
                    and out.parallel(group.kind, group.pivot, sub)
                ):
                    continue
                for ins in sub:
                    out.naive(ins)

    check_no_remote_gates(out.instructions)
    check_electron_hygiene(out.instructions)
    circuit = PhysicalCircuit(
        topology=topology,
        placement=placement,
        instructions=tuple(out.instructions),
        classical_bit_count=out.bits.next_free,
        logical_bit_count=bucketed.classical_bit_count,
        blocks=tuple(out.blocks),
        name=name,
        logical_qubit_count=bucketed.qubit_count,
    )
    logger.debug("Compiled %s (%s): %d instructions, %d EPR", name, mode.value, len(circuit), circuit.epr_count)
    return circuit
