"""ASAP bucketization with atomic merge groups."""

import logging
from typing import TYPE_CHECKING, Optional, Sequence, Union

import networkx as nx

from circuit_ir import (
    AtomicityViolationError,
    Bucket,
    BucketedCircuit,
    Instruction,
    MergeGroup,
    QubitRef,
    dependency_edges,
)

if TYPE_CHECKING:
    from frontend import LogicalCircuit

logger = logging.getLogger(__name__)


def _numbered(instrs: Sequence[Instruction], groups: Sequence[MergeGroup]) -> list[Instruction]:
    """Ensure uids are unique, renumbering by position when no group relies on them."""
    uids = [ins.uid for ins in instrs]
    if -1 not in uids and len(set(uids)) == len(uids):
        return list(instrs)
    if groups:
        raise ValueError("instructions referenced by merge groups need unique uids")
    return [ins.with_uid(pos) for pos, ins in enumerate(instrs)]


def _infer_qubit_count(instrs: Sequence[Instruction]) -> int:
    indices = [q for ins in instrs for q in ins.operands if not isinstance(q, QubitRef)]
    return max(indices) + 1 if indices else 0


def _schedule(
    instrs: Sequence[Instruction],
    groups: Sequence[MergeGroup],
) -> tuple[list[list[Instruction]], list[list[MergeGroup]]]:
    """Assign every instruction, or atomic group, to its earliest legal bucket.

    Returns:
        Per-bucket instructions (program order within a bucket) and the
        groups landing in each bucket.
    """
    position = {ins.uid: pos for pos, ins in enumerate(instrs)}
    unit_of = list(range(len(instrs)))
    group_of_unit: dict[int, MergeGroup] = {}
    for group in groups:
        missing = [uid for uid in group.members if uid not in position]
        if missing:
            raise ValueError(f"group {group.describe()} references unknown instructions {missing}")
        head = min(position[uid] for uid in group.members)
        for uid in group.members:
            unit_of[position[uid]] = head
        group_of_unit[head] = group

    graph = nx.DiGraph()
    graph.add_nodes_from(set(unit_of))
    for earlier, later in dependency_edges(instrs):
        a, b = unit_of[earlier], unit_of[later]
        if a != b:
            graph.add_edge(a, b)

    try:
        order = list(nx.lexicographical_topological_sort(graph))
    except nx.NetworkXUnfeasible:
        cycle = nx.find_cycle(graph)
        path = " -> ".join(str(instrs[a]) for a, _ in cycle)
        raise AtomicityViolationError(f"merge groups cannot be scheduled atomically: cycle {path}") from None

    level: dict[int, int] = {}
    for unit in order:
        level[unit] = max((level[p] + 1 for p in graph.predecessors(unit)), default=0)

    depth = max(level.values(), default=-1) + 1
    layers: list[list[Instruction]] = [[] for _ in range(depth)]
    layer_groups: list[list[MergeGroup]] = [[] for _ in range(depth)]
    for pos, ins in enumerate(instrs):
        layers[level[unit_of[pos]]].append(ins)
    for head in sorted(group_of_unit):
        layer_groups[level[head]].append(group_of_unit[head])
    return layers, layer_groups


def bucketize(
    circuit: Union[Sequence[Instruction], "LogicalCircuit"],
    qubit_count: Optional[int] = None,
    classical_bit_count: Optional[int] = None,
) -> BucketedCircuit:
    """Partition a circuit into ASAP buckets.

    Args:
        circuit: A logical circuit or a bare instruction sequence.
        qubit_count: Overrides the circuit's qubit count.
        classical_bit_count: Overrides the circuit's classical bit count.

    Returns:
        Buckets whose count equals the structural depth of the circuit.
    """
    if hasattr(circuit, "instructions"):
        instrs = list(circuit.instructions)
        qubit_count = circuit.qubit_count if qubit_count is None else qubit_count
        if classical_bit_count is None:
            classical_bit_count = circuit.classical_bit_count
    else:
        instrs = list(circuit)
    instrs = _numbered(instrs, ())
    layers, _ = _schedule(instrs, ())
    return BucketedCircuit(
        tuple(Bucket(tuple(layer)) for layer in layers),
        qubit_count if qubit_count is not None else _infer_qubit_count(instrs),
        classical_bit_count or 0,
    )


def rebucketize(
    instrs: Sequence[Instruction],
    groups: Sequence[MergeGroup],
    qubit_count: Optional[int] = None,
    classical_bit_count: int = 0,
) -> BucketedCircuit:
    """Bucketize with every merge group scheduled as one atomic unit.

    Each bucket's ``joint_groups`` lists the groups placed in it.

    Raises:
        AtomicityViolationError: external dependencies interleave with a
            group so that its members cannot share a bucket.
        ValueError: an instruction belongs to two groups.
    """
    seen: set[int] = set()
    for group in groups:
        overlap = seen.intersection(group.members)
        if overlap:
            raise ValueError(f"instructions {sorted(overlap)} belong to more than one group")
        seen.update(group.members)
    instrs = _numbered(instrs, groups)
    layers, layer_groups = _schedule(instrs, groups)
    buckets = tuple(Bucket(tuple(layer), tuple(gs)) for layer, gs in zip(layers, layer_groups))
    logger.debug("Rebucketized %d instructions, %d groups into %d buckets", len(instrs), len(groups), len(buckets))
    return BucketedCircuit(
        buckets,
        qubit_count if qubit_count is not None else _infer_qubit_count(instrs),
        classical_bit_count,
    )


def remove_empty(bucketed: BucketedCircuit) -> BucketedCircuit:
    """Drop empty buckets, keeping order; unchanged input is returned as is."""
    kept = tuple(bucket for bucket in bucketed.buckets if bucket.instructions)
    if len(kept) == len(bucketed.buckets):
        return bucketed
    return BucketedCircuit(kept, bucketed.qubit_count, bucketed.classical_bit_count)
