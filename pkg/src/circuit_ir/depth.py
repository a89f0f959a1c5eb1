"""Dependency DAG, structural layer depth and cost-weighted depth."""

from __future__ import annotations

from typing import Callable, Iterator, Optional, Sequence

import networkx as nx

from .buckets import BucketedCircuit, GroupKind, MergeGroup
from .cost import CostModel
from .errors import AnnotationMissingError
from .instructions import GateKind, Instruction, Qubit, TWO_QUBIT_GATES
from .topology import Placement, QubitRef

NodeOf = Callable[[Qubit], int]


def dependency_edges(instrs: Sequence[Instruction]) -> Iterator[tuple[int, int]]:
    """Yield ``(earlier, later)`` position pairs of the dependency DAG.

    Two instructions depend when they share a qubit or when the later
    one's condition reads a bit the earlier one writes. A BARRIER depends
    on everything since the previous barrier and everything after it
    depends on the barrier. Only the nearest predecessor per qubit or bit
    is emitted; the transitive closure is the full relation.
    """
    last_use: dict[Qubit, int] = {}
    last_writer: dict[int, int] = {}
    since_fence: list[int] = []
    fence: Optional[int] = None

    for pos, ins in enumerate(instrs):
        if ins.kind is GateKind.BARRIER:
            preds = set(since_fence)
            if fence is not None:
                preds.add(fence)
            for p in sorted(preds):
                yield p, pos
            fence = pos
            since_fence = []
            last_use.clear()
            last_writer.clear()
            continue

        preds = set()
        if fence is not None:
            preds.add(fence)
        for q in ins.operands:
            if q in last_use:
                preds.add(last_use[q])
            last_use[q] = pos
        for bit in ins.reads:
            if bit in last_writer:
                preds.add(last_writer[bit])
        if ins.writes is not None:
            last_writer[ins.writes] = pos
        for p in sorted(preds):
            yield p, pos
        since_fence.append(pos)


def dependency_graph(instrs: Sequence[Instruction]) -> nx.DiGraph:
    """Dependency DAG over instruction positions."""
    graph = nx.DiGraph()
    graph.add_nodes_from(range(len(instrs)))
    graph.add_edges_from(dependency_edges(instrs))
    return graph


def layer_levels(instrs: Sequence[Instruction]) -> list[int]:
    """ASAP layer index of every instruction (0-based)."""
    levels = [0] * len(instrs)
    for earlier, later in dependency_edges(instrs):
        # edges arrive grouped by ascending ``later``
        levels[later] = max(levels[later], levels[earlier] + 1)
    return levels


def depth_layers(instrs: Sequence[Instruction]) -> int:
    """Length of the longest dependency chain (0 for an empty circuit)."""
    levels = layer_levels(instrs)
    return max(levels) + 1 if levels else 0


def placement_nodes(placement: Optional[Placement]) -> NodeOf:
    """Node lookup for logical or physical operands.

    Without a placement every logical qubit is its own node.
    """

    def node_of(q: Qubit) -> int:
        if isinstance(q, QubitRef):
            return q.node
        if placement is None:
            return q
        return placement.node_of(q)

    return node_of


def is_distributed(ins: Instruction, node_of: NodeOf) -> bool:
    return ins.kind in TWO_QUBIT_GATES and node_of(ins.operands[0]) != node_of(ins.operands[1])


def partition_group(
    group: MergeGroup,
    members: Sequence[Instruction],
    node_of: NodeOf,
) -> tuple[list[Instruction], list[list[Instruction]]]:
    """Split a group into local members and node-distinct distributed sub-groups.

    For a shared group, a member whose partner qubit sits on the pivot's
    node is local. Distributed members are dealt, in (control, target)
    order, into the first sub-group that has no member on the same node.
    Independent groups yield one singleton sub-group per distributed
    member.

    Returns:
        ``(local_members, subgroups)``.
    """
    ordered = sorted(members, key=lambda ins: (ins.control, ins.target))
    local = [ins for ins in ordered if not is_distributed(ins, node_of)]
    remote = [ins for ins in ordered if is_distributed(ins, node_of)]
    if not group.kind.is_shared:
        return local, [[ins] for ins in remote]

    def partner(ins: Instruction) -> Qubit:
        return ins.target if group.kind is GroupKind.SHARED_CONTROL else ins.control

    subgroups: list[list[Instruction]] = []
    for ins in remote:
        node = node_of(partner(ins))
        for sub in subgroups:
            if all(node_of(partner(other)) != node for other in sub):
                sub.append(ins)
                break
        else:
            subgroups.append([ins])
    return local, subgroups


def group_cost(
    group: MergeGroup,
    members: Sequence[Instruction],
    cost: CostModel,
    node_of: NodeOf,
    min_parallel: int = 2,
) -> int:
    """Weighted cost of one merge group."""
    local, subgroups = partition_group(group, members, node_of)
    if not group.kind.is_shared:
        costs = [1] * len(local) + [cost.naive_cnot_cost] * len(subgroups)
        return max(costs, default=0)
    total = len(local)
    for sub in subgroups:
        if len(sub) >= max(2, min_parallel):
            total += cost.parallel_cost(len(sub))
        else:
            total += cost.naive_cost(len(sub))
    return total


def weighted_depth(
    bucketed: BucketedCircuit,
    cost: CostModel,
    placement: Optional[Placement] = None,
    min_parallel: int = 2,
) -> int:
    """Critical-path cost of an annotated bucketed circuit.

    Each bucket contributes the maximum cost of its items: merge groups,
    distributed CZs at the naive rate and every other gate at 1. Shared
    sub-groups smaller than ``min_parallel`` are charged as naive chains.

    Raises:
        AnnotationMissingError: a CNOT is not covered by a merge group.
    """
    node_of = placement_nodes(placement)
    total = 0
    for index, bucket in enumerate(bucketed.buckets):
        cnots = bucket.cnots
        if cnots and bucket.joint_groups is None:
            raise AnnotationMissingError(f"bucket {index} has CNOTs but no group annotation")
        by_uid = bucket.by_uid()
        covered: set[int] = set()
        items: list[int] = []
        for group in bucket.joint_groups or ():
            members = [by_uid[uid] for uid in group.members if uid in by_uid]
            covered.update(ins.uid for ins in members)
            items.append(group_cost(group, members, cost, node_of, min_parallel))
        for ins in bucket.instructions:
            if ins.is_cnot:
                if ins.uid not in covered:
                    raise AnnotationMissingError(f"CNOT '{ins}' in bucket {index} is not in any group")
                continue
            if ins.kind is GateKind.CZ and is_distributed(ins, node_of):
                items.append(cost.naive_cnot_cost)
            else:
                items.append(1)
        total += max(items, default=0)
    return total
