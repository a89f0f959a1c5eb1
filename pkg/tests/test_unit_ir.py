"""
Unit tests for the circuit intermediate representation
"""
import sys
from pathlib import Path

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from circuit_ir import (
    AnnotationMissingError,
    Bucket,
    BucketedCircuit,
    Condition,
    CostModel,
    GateKind,
    GroupKind,
    Instruction,
    InvariantViolation,
    MergeGroup,
    NodeTopology,
    Placement,
    PlacementError,
    QasmSyntaxError,
    QubitRef,
    cnot,
    conditioned,
    dependency_edges,
    dependency_graph,
    depth_layers,
    gate,
    measure,
    validate_instructions,
    weighted_depth,
)
from decomposer import annotate_buckets
from scheduler import bucketize


# Strategy shared with the scheduler tests: small random logical programs.
def _instruction(n_qubits: int):
    single = st.builds(
        lambda kind, q: gate(kind, q),
        st.sampled_from([GateKind.H, GateKind.X, GateKind.T, GateKind.Z]),
        st.integers(0, n_qubits - 1),
    )
    pair = st.lists(st.integers(0, n_qubits - 1), min_size=2, max_size=2, unique=True).map(
        lambda qs: cnot(qs[0], qs[1])
    )
    barrier = st.lists(st.integers(0, n_qubits - 1), min_size=1, max_size=n_qubits, unique=True).map(
        lambda qs: Instruction(GateKind.BARRIER, tuple(qs))
    )
    return st.one_of(single, pair, pair, barrier)


programs = st.integers(2, 5).flatmap(lambda n: st.lists(_instruction(n), max_size=50))


def test_qubit_ref_text():
    """Test the physical qubit notation"""
    assert str(QubitRef.comm(1)) == "n1.e0"
    assert str(QubitRef.memory(0, 3)) == "n0.m3"
    assert QubitRef.comm(2).is_comm
    assert not QubitRef.memory(2, 0).is_comm


def test_topology_bounds():
    """Test topology validation and containment"""
    topo = NodeTopology(3)
    assert topo.memory_per_node == 4
    assert topo.contains(QubitRef.memory(2, 3))
    assert not topo.contains(QubitRef.memory(3, 0))
    assert not topo.contains(QubitRef.memory(0, 4))
    assert list(topo.comm_qubits()) == [QubitRef.comm(0), QubitRef.comm(1), QubitRef.comm(2)]
    with pytest.raises(ValueError):
        NodeTopology(0)


def test_placement_rules():
    """Test injectivity, packing and buffer selection"""
    placement = Placement.one_per_node(3)
    assert placement[2] == QubitRef.memory(2, 0)
    assert placement.node_span == 3
    with pytest.raises(PlacementError):
        Placement((QubitRef.memory(0, 0), QubitRef.memory(0, 0)))
    with pytest.raises(PlacementError):
        Placement((QubitRef.comm(0),))
    with pytest.raises(PlacementError):
        placement[5]

    packed = Placement.packed(5, 2)
    assert [ref.node for ref in packed.slots] == [0, 0, 1, 1, 2]
    topo = NodeTopology(3, memory_per_node=3)
    assert packed.free_memory_slots(0, topo) == [2]
    assert packed.buffer_for(0, topo) == QubitRef.memory(0, 2)
    assert Placement.packed(3, 3).buffer_for(0, NodeTopology(1, 3)) is None
    with pytest.raises(PlacementError):
        Placement.one_per_node(4).check_against(NodeTopology(3))


def test_instruction_text():
    """Test the listing form of instructions"""
    m = measure(QubitRef.comm(0), 3)
    assert str(m) == "measz n0.e0 -> c3"
    z = conditioned(GateKind.Z, QubitRef.memory(0, 0), [1, 0])
    assert str(z) == "z n0.m0 ?parity(c0,c1)=1"
    assert str(Instruction(GateKind.RESET, (QubitRef.comm(1),))) == "reset n1.e0"
    assert cnot(0, 1).is_cnot
    assert cnot(0, 1).control == 0 and cnot(0, 1).target == 1


def test_condition_parity():
    """Test parity semantics of feed-forward conditions"""
    cond = Condition.on([1, 2])
    assert not cond.holds({1: 1, 2: 1})
    assert cond.holds({1: 1, 2: 0})
    assert Condition.on([1, 2], parity=0).holds({1: 1, 2: 1})
    with pytest.raises(ValueError):
        Condition.on([])
    with pytest.raises(ValueError):
        Condition.on([0], parity=2)


def test_gate_kind_properties():
    """Test arity and parameter counts"""
    assert GateKind.CNOT.arity == 2
    assert GateKind.EPR.arity == 2
    assert GateKind.H.arity == 1
    assert GateKind.BARRIER.arity is None
    assert GateKind.RZ.param_count == 1
    assert GateKind.MEASURE_X.is_measurement


def test_cost_model_defaults():
    """Test the default weights and the break-even size"""
    cost = CostModel()
    assert cost.naive_cnot_cost == 19
    for n in range(2, 7):
        assert cost.parallel_cost(n) == 42 + (n - 2)
    assert cost.parallel_cost(3) < cost.naive_cost(3)
    assert cost.parallel_cost(2) > cost.naive_cost(2)
    assert cost.break_even() == 3
    assert CostModel.unit().parallel_cost(5) == 5
    with pytest.raises(ValueError):
        CostModel(naive_cnot_cost=0)
    with pytest.raises(ValueError):
        cost.parallel_cost(1)


def test_merge_group_rules():
    """Test merge group validation and description"""
    group = MergeGroup(GroupKind.SHARED_CONTROL, (0, 2), pivot=0)
    assert group.describe() == "shared_control(0):2"
    assert group.extended([5, 2]).members == (0, 2, 5)
    assert MergeGroup(GroupKind.INDEPENDENT, (4,)).describe() == "independent:1"
    with pytest.raises(ValueError):
        MergeGroup(GroupKind.SHARED_TARGET, (1, 2))
    with pytest.raises(ValueError):
        MergeGroup(GroupKind.INDEPENDENT, ())


def test_dependency_edges_qubits_and_bits():
    """Test shared-qubit and read-after-write edges"""
    instrs = [
        gate(GateKind.H, 0),
        measure(0, 0),
        gate(GateKind.X, 1),
        conditioned(GateKind.X, 2, [0]),
    ]
    edges = set(dependency_edges(instrs))
    assert edges == {(0, 1), (1, 3)}
    assert depth_layers(instrs) == 3


def test_barrier_is_a_fence():
    """Test that a barrier occupies its own layer and orders everything"""
    instrs = [
        gate(GateKind.H, 0),
        Instruction(GateKind.BARRIER, (0,)),
        gate(GateKind.H, 1),
    ]
    assert set(dependency_edges(instrs)) == {(0, 1), (1, 2)}
    assert depth_layers(instrs) == 3


@settings(max_examples=200, deadline=None)
@given(programs)
def test_depth_matches_dag_longest_path(instrs):
    """Test bucket count against the longest path of the dependency DAG"""
    graph = dependency_graph(instrs)
    expected = nx.dag_longest_path_length(graph) + 1 if instrs else 0
    assert depth_layers(instrs) == expected
    assert len(bucketize(instrs)) == expected


@settings(max_examples=200, deadline=None)
@given(programs)
def test_unit_weighted_depth_counts_buckets(instrs):
    """Test that unit costs reduce weighted depth to the bucket count"""
    bucketed = bucketize(instrs)
    assert weighted_depth(annotate_buckets(bucketed), CostModel.unit()) == len(bucketed) == depth_layers(instrs)


@settings(max_examples=200, deadline=None)
@given(programs, st.randoms(use_true_random=False))
def test_depth_ignores_order_within_layers(instrs, rng):
    """Test that shuffling the gates of each layer keeps every layer"""
    bucketed = bucketize(instrs)
    shuffled = []
    for bucket in bucketed.buckets:
        layer = list(bucket.instructions)
        rng.shuffle(layer)
        shuffled.extend(layer)
    assert len(shuffled) == len(instrs)
    assert depth_layers(shuffled) == depth_layers(instrs)
    reordered = bucketize(shuffled)
    assert [len(b.instructions) for b in reordered.buckets] == [len(b.instructions) for b in bucketed.buckets]


@pytest.mark.parametrize("k", range(1, 11))
def test_naive_weighted_depth_is_linear(k):
    """Test that k sequential distributed CNOTs weigh 19k"""
    plan = annotate_buckets(bucketize([cnot(0, 1)] * k, qubit_count=2))
    assert weighted_depth(plan, CostModel()) == 19 * k


def test_weighted_depth_groups():
    """Test parallel and demoted group costs"""
    instrs = [cnot(0, 1).with_uid(0), cnot(0, 2).with_uid(1), cnot(0, 3).with_uid(2)]
    group = MergeGroup(GroupKind.SHARED_CONTROL, (0, 1, 2), pivot=0)
    bucketed = BucketedCircuit((Bucket(tuple(instrs), (group,)),), qubit_count=4)
    assert weighted_depth(bucketed, CostModel()) == 43
    assert weighted_depth(bucketed, CostModel(), min_parallel=4) == 57

    local = Placement.packed(4, 2)
    # CNOT(0,1) is local; (0,2) and (0,3) share node 1 and split into naive singletons
    assert weighted_depth(bucketed, CostModel(), placement=local) == 1 + 19 + 19


def test_weighted_depth_needs_annotation():
    """Test that unannotated CNOT buckets are rejected"""
    with pytest.raises(AnnotationMissingError):
        weighted_depth(bucketize([cnot(0, 1)]), CostModel())


def test_validation_codes():
    """Test structural violations are reported by code"""
    topo = NodeTopology(2)
    instrs = [
        Instruction(GateKind.CNOT, (0,)),
        Instruction(GateKind.EPR, (QubitRef.comm(0), QubitRef.comm(0))),
        conditioned(GateKind.X, QubitRef.memory(0, 0), [4]),
        Instruction(GateKind.H, (QubitRef.memory(5, 0),)),
        Instruction(GateKind.EPR, (QubitRef.comm(0), QubitRef.memory(1, 0))),
    ]
    codes = [v.code for v in validate_instructions(instrs, topology=topo)]
    assert "arity" in codes
    assert "duplicate operand" in codes
    assert "acausal condition" in codes
    assert "qubit out of range" in codes
    assert "epr operands" in codes

    logical = validate_instructions([gate(GateKind.RESET, 0)], qubit_count=1, logical=True)
    assert [v.code for v in logical] == ["gate set"]


def test_error_messages():
    """Test error hierarchy and message shape"""
    err = QasmSyntaxError("expected ';'", 3, 7)
    assert str(err) == "line 3, column 7: expected ';'"
    assert isinstance(err, ValueError)
    violation = InvariantViolation("no inter-node gates", "cx spans nodes")
    assert violation.invariant == "no inter-node gates"
    assert "no inter-node gates" in str(violation)
