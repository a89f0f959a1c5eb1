"""The optimization pipeline: sweeps, cleanup, demotion and the conservative safety net."""

import logging
from typing import Optional

from circuit_ir import (
    BucketedCircuit,
    CostModel,
    MergeGroup,
    Mode,
    NodeTopology,
    Placement,
)
from decomposer import annotate_buckets, compile_circuit
from scheduler import bucketize, rebucketize, remove_empty

from .commutation import commuting_moves
from .sweeps import backward_sweep, forward_sweep

logger = logging.getLogger(__name__)


def naive_plan(bucketed: BucketedCircuit) -> BucketedCircuit:
    """ASAP buckets of the circuit with every CNOT in its own group."""
    rebuilt = bucketize(bucketed.flatten(), bucketed.qubit_count, bucketed.classical_bit_count)
    return annotate_buckets(rebuilt)


def min_group_size(mode: Mode, cost: CostModel) -> int:
    return cost.min_group_size_conservative if mode is Mode.CONSERVATIVE else 2


def optimize(
    bucketed: BucketedCircuit,
    mode: Mode = Mode.CONSERVATIVE,
    cost: Optional[CostModel] = None,
    placement: Optional[Placement] = None,
    topology: Optional[NodeTopology] = None,
) -> tuple[BucketedCircuit, list[MergeGroup]]:
    """Run the sweeps and return an annotated plan with its merge groups.

    Passes: commutation moves (relaxed only), forward sweep, backward
    sweep, empty-bucket removal and re-bucketing. Groups smaller than the
    mode's minimum are dissolved. In conservative mode the compiled plan is
    compared against the compiled naive plan and the naive plan wins when
    the optimized one would be deeper.

    Args:
        bucketed: Output of ``bucketize``.
        mode: Optimization regime.
        cost: Cost model; its conservative minimum group size applies.
        placement: Placement used by the safety-net compilation.
        topology: Topology used by the safety-net compilation.

    Returns:
        ``(plan, groups)`` where every bucket of ``plan`` is annotated.
    """
    cost = cost or CostModel()
    if mode is Mode.NAIVE:
        return naive_plan(bucketed), []

    qubits, bits = bucketed.qubit_count, bucketed.classical_bit_count
    work = commuting_moves(bucketed) if mode is Mode.RELAXED else bucketed

    instrs, groups = forward_sweep(work, mode)
    work = rebucketize(instrs, groups, qubits, bits)
    instrs, groups = backward_sweep(work, mode)
    work = remove_empty(rebucketize(instrs, groups, qubits, bits))

    minimum = min_group_size(mode, cost)
    kept = [g for g in groups if g.size >= minimum]
    for group in groups:
        if group.size < minimum:
            logger.debug("Dissolved %s below minimum size %d", group.describe(), minimum)
    plan = annotate_buckets(rebucketize(work.flatten(), kept, qubits, bits))

    if mode is Mode.CONSERVATIVE:
        baseline = naive_plan(bucketed)
        naive_depth = compile_circuit(baseline, placement=placement, topology=topology, mode=Mode.NAIVE, cost=cost).depth()
        opt_depth = compile_circuit(plan, placement=placement, topology=topology, mode=mode, cost=cost).depth()
        if opt_depth > naive_depth:
            logger.warning(
                "Optimized plan is deeper than naive (%d > %d); keeping the naive plan", opt_depth, naive_depth
            )
            return baseline, []
    return plan, kept
