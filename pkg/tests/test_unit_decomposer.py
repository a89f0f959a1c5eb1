"""
Unit tests for distributed gate decomposition
"""
import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from circuit_ir import (
    Bucket,
    CostModel,
    GateKind,
    GroupKind,
    Instruction,
    InvariantViolation,
    LocalGateError,
    MalformedBucketError,
    MergeGroup,
    Mode,
    NodeCollisionError,
    NodeTopology,
    Placement,
    PlacementError,
    QubitRef,
    ResourceError,
    cnot,
    gate,
)
from decomposer import (
    BitAllocator,
    build_ghz,
    check_electron_hygiene,
    check_no_remote_gates,
    compile_circuit,
    decompose_naive_cnot,
    decompose_naive_cz,
    decompose_shared_control,
    decompose_shared_target,
    group_bucket,
    parallel_threshold,
)
from frontend import gen_bv
from parallelizer import naive_plan, optimize
from scheduler import bucketize

E0, E1 = QubitRef.comm(0), QubitRef.comm(1)


def _eprs(instrs):
    return sum(1 for ins in instrs if ins.kind is GateKind.EPR)


def test_naive_cnot_protocol_shape():
    """Test the teleported CNOT sequence"""
    placement = Placement.one_per_node(2)
    out = decompose_naive_cnot(cnot(0, 1), placement, BitAllocator())
    assert [str(ins) for ins in out] == [
        "epr n0.e0 n1.e0",
        "cx n0.m0 n0.e0",
        "measz n0.e0 -> c0",
        "x n1.e0 ?parity(c0)=1",
        "cx n1.e0 n1.m0",
        "measx n1.e0 -> c1",
        "z n0.m0 ?parity(c1)=1",
        "reset n0.e0",
        "reset n1.e0",
    ]
    check_no_remote_gates(out)
    check_electron_hygiene(out)


def test_naive_cz_uses_remote_cz():
    """Test the CZ variant swaps the remote gate only"""
    out = decompose_naive_cz(gate(GateKind.CZ, 0, 1), Placement.one_per_node(2), BitAllocator(4))
    assert out[4].kind is GateKind.CZ
    assert out[2].writes == 4 and out[5].writes == 5


def test_naive_cnot_rejects_local_operands():
    """Test that same-node operands are not teleported"""
    with pytest.raises(LocalGateError):
        decompose_naive_cnot(cnot(0, 1), Placement.packed(2, 2))


def test_bit_allocator_counts_from_start():
    """Test fresh classical bits"""
    bits = BitAllocator(3)
    assert bits.next_free == 3
    assert [bits(), bits()] == [3, 4]
    assert bits.next_free == 5


@pytest.mark.parametrize("k", [2, 3, 4, 5])
def test_ghz_epr_count(k):
    """Test that k parties consume k-1 Bell pairs"""
    out = build_ghz(list(range(k)), QubitRef.memory(0, 1), BitAllocator())
    assert _eprs(out) == k - 1
    assert len(out) == (1 if k == 2 else 3 + 5 * (k - 2))
    check_no_remote_gates(out)


def test_ghz_errors():
    """Test GHZ argument validation"""
    with pytest.raises(ValueError):
        build_ghz([0], None)
    with pytest.raises(ValueError):
        build_ghz([0, 1, 1], QubitRef.memory(0, 1))
    with pytest.raises(ResourceError):
        build_ghz([0, 1, 2], None)
    with pytest.raises(ValueError):
        build_ghz([0, 1, 2], QubitRef.memory(1, 1))
    assert build_ghz([0, 1], None) == [Instruction(GateKind.EPR, (E0, E1))]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_shared_control_consumes_one_pair_per_target(n):
    """Test the fan-out construction's resources and locality"""
    members = [cnot(0, t).with_uid(t) for t in range(1, n + 1)]
    out = decompose_shared_control(members, Placement.one_per_node(n + 1), QubitRef.memory(0, 1), BitAllocator())
    assert _eprs(out) == n
    applied = [ins for ins in out if ins.kind is GateKind.CNOT and ins.operands[0].is_comm and not ins.operands[1].is_comm]
    assert len(applied) == n
    assert sum(1 for ins in out if ins.kind is GateKind.MEASURE_X) == n
    check_no_remote_gates(out)


def test_shared_target_is_h_conjugated():
    """Test the fan-in construction wraps CZs in H on the target"""
    members = [cnot(c, 0).with_uid(c) for c in (1, 2, 3)]
    out = decompose_shared_target(members, Placement.one_per_node(4), QubitRef.memory(0, 1), BitAllocator())
    target = QubitRef.memory(0, 0)
    assert out[0] == Instruction(GateKind.H, (target,))
    assert out[-1] == Instruction(GateKind.H, (target,))
    assert sum(1 for ins in out if ins.kind is GateKind.CZ) == 3
    assert _eprs(out) == 3


def test_shared_constructions_reject_bad_members():
    """Test member validation of the parallel constructions"""
    placement = Placement.one_per_node(4)
    buffer = QubitRef.memory(0, 1)
    with pytest.raises(ValueError):
        decompose_shared_control([cnot(0, 1)], placement, buffer)
    with pytest.raises(ValueError):
        decompose_shared_control([cnot(0, 1), cnot(2, 3)], placement, buffer)
    with pytest.raises(ValueError):
        decompose_shared_target([cnot(1, 0), cnot(2, 3)], placement, buffer)
    with pytest.raises(NodeCollisionError):
        decompose_shared_control([cnot(0, 1), cnot(0, 2)], Placement.packed(3, 2), QubitRef.memory(0, 2))


def test_electron_hygiene():
    """Test communication qubits must be reset before reuse"""
    epr = Instruction(GateKind.EPR, (E0, E1))
    resets = [Instruction(GateKind.RESET, (E0,)), Instruction(GateKind.RESET, (E1,))]
    check_electron_hygiene([epr, *resets, epr, *resets])
    with pytest.raises(InvariantViolation):
        check_electron_hygiene([epr, epr])
    with pytest.raises(InvariantViolation):
        check_electron_hygiene([epr, resets[0]])
    swap = Instruction(GateKind.SWAP, (E0, QubitRef.memory(0, 1)))
    check_electron_hygiene([epr, swap, resets[1], epr, resets[0], resets[1]] + [swap, resets[0]])


def test_no_remote_gates():
    """Test that only EPR may span nodes"""
    check_no_remote_gates([Instruction(GateKind.EPR, (E0, E1))])
    with pytest.raises(InvariantViolation):
        check_no_remote_gates([Instruction(GateKind.CNOT, (QubitRef.memory(0, 0), QubitRef.memory(1, 0)))])


def test_group_bucket_partition():
    """Test per-bucket grouping"""
    bucket = Bucket(tuple(ins.with_uid(k) for k, ins in enumerate([cnot(0, 1), cnot(0, 2), cnot(3, 4)])))
    assert group_bucket(bucket) == [
        MergeGroup(GroupKind.SHARED_CONTROL, (0, 1), pivot=0),
        MergeGroup(GroupKind.INDEPENDENT, (2,)),
    ]
    fanin = Bucket(tuple(ins.with_uid(k) for k, ins in enumerate([cnot(1, 0), cnot(2, 0)])))
    assert group_bucket(fanin) == [MergeGroup(GroupKind.SHARED_TARGET, (0, 1), pivot=0)]


def test_group_bucket_rejects_malformed_bucket():
    """Test that overlapping groups are reported"""
    bucket = Bucket(tuple(ins.with_uid(k) for k, ins in enumerate([cnot(0, 1), cnot(0, 2), cnot(3, 1)])))
    with pytest.raises(MalformedBucketError):
        group_bucket(bucket)


def test_parallel_threshold_per_mode():
    """Test the parallel block threshold"""
    cost = CostModel()
    assert parallel_threshold(Mode.NAIVE, cost) is None
    assert parallel_threshold(Mode.RELAXED, cost) == 2
    assert parallel_threshold(Mode.CONSERVATIVE, cost) == 3


def test_compile_naive_bv():
    """Test that the naive plan teleports every CNOT"""
    circuit = gen_bv(3, "111")
    physical = compile_circuit(naive_plan(bucketize(circuit)), mode=Mode.NAIVE, name=circuit.name)
    assert physical.name == "bv_3_111"
    assert physical.epr_count == 3
    assert physical.parallel_block_count == 0
    assert [block.weighted_cost for block in physical.blocks] == [19, 19, 19]
    assert physical.logical_bit_count == 3
    assert physical.classical_bit_count == 3 + 2 * 3
    assert sum(1 for ins in physical.instructions if ins.kind is GateKind.MEASURE_Z and ins.writes < 3) == 3


def test_compile_parallel_bv_is_shallower():
    """Test that a fan-in group beats sequential teleportation"""
    circuit = gen_bv(3, "111")
    bucketed = bucketize(circuit)
    plan, groups = optimize(bucketed, Mode.CONSERVATIVE)
    physical = compile_circuit(plan, mode=Mode.CONSERVATIVE)
    naive = compile_circuit(naive_plan(bucketed), mode=Mode.NAIVE)
    assert len(groups) == 1
    assert physical.parallel_block_count == 1
    assert physical.epr_count == 3
    assert physical.depth() < naive.depth()


def test_compile_falls_back_without_buffer():
    """Test naive decomposition when the root node has no free memory"""
    plan, groups = optimize(bucketize(gen_bv(3, "111")), Mode.CONSERVATIVE)
    assert groups
    physical = compile_circuit(
        plan,
        placement=Placement.one_per_node(4),
        topology=NodeTopology(4, memory_per_node=1),
        mode=Mode.CONSERVATIVE,
    )
    assert physical.parallel_block_count == 0
    assert physical.epr_count == 3


def test_compile_local_gates_need_no_entanglement():
    """Test that same-node CNOTs stay local"""
    physical = compile_circuit(
        bucketize([cnot(0, 1), gate(GateKind.CZ, 1, 0)]),
        placement=Placement.packed(2, 2),
        topology=NodeTopology(1),
    )
    assert physical.epr_count == 0
    assert [str(ins) for ins in physical.instructions] == ["cx n0.m0 n0.m1", "cz n0.m1 n0.m0"]


def test_compile_rejects_short_placement():
    """Test that every logical qubit needs a slot"""
    with pytest.raises(PlacementError):
        compile_circuit(bucketize(gen_bv(3, "111")), placement=Placement.one_per_node(2))


def test_compile_rejects_non_logical_instructions():
    """Test that resets are not compiled"""
    with pytest.raises(ValueError):
        compile_circuit(bucketize([gate(GateKind.RESET, 0), cnot(0, 1)]))
