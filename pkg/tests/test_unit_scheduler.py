"""
Unit tests for bucketization
"""
import sys
from pathlib import Path

import pytest
from hypothesis import given, settings

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from circuit_ir import (
    AtomicityViolationError,
    Bucket,
    BucketedCircuit,
    GateKind,
    GroupKind,
    MergeGroup,
    cnot,
    dependency_edges,
    gate,
)
from frontend import gen_bv
from scheduler import bucketize, flatten, rebucketize, remove_empty

from test_unit_ir import programs


def test_bucketize_asap_layers():
    """Test that gates land in their earliest layer"""
    instrs = [gate(GateKind.H, 0), gate(GateKind.H, 1), cnot(0, 1), gate(GateKind.X, 2)]
    bucketed = bucketize(instrs)
    assert len(bucketed) == 2
    assert [ins.kind for ins in bucketed.buckets[0].instructions] == [GateKind.H, GateKind.H, GateKind.X]
    assert bucketed.buckets[1].cnots == [cnot(0, 1).with_uid(2)]
    assert bucketed.qubit_count == 3
    assert bucketed.buckets[0].joint_groups is None


def test_bucketize_logical_circuit():
    """Test that circuit metadata carries into the buckets"""
    circuit = gen_bv(3, "111")
    bucketed = bucketize(circuit)
    assert bucketed.qubit_count == 4
    assert bucketed.classical_bit_count == 3
    assert sorted(ins.uid for ins in flatten(bucketed)) == list(range(len(circuit)))
    # H layer, ancilla H, three CNOTs on the ancilla, H layer, measurements
    assert len(bucketed) == 7


def test_bucketize_empty():
    """Test that an empty program has no buckets"""
    bucketed = bucketize([], qubit_count=2)
    assert len(bucketed) == 0
    assert bucketed.qubit_count == 2


@settings(max_examples=200, deadline=None)
@given(programs)
def test_buckets_respect_dependencies(instrs):
    """Test every dependency crosses to a strictly later bucket"""
    bucketed = bucketize(instrs)
    bucket_of = {ins.uid: k for k, bucket in enumerate(bucketed.buckets) for ins in bucket.instructions}
    ordered = flatten(bucketed)
    for earlier, later in dependency_edges(ordered):
        assert bucket_of[ordered[earlier].uid] < bucket_of[ordered[later].uid]
    for bucket in bucketed.buckets:
        used = [q for ins in bucket.instructions for q in ins.operands]
        assert len(used) == len(set(used))
    assert len(bucketize(ordered)) == len(bucketed)


def test_rebucketize_keeps_groups_atomic():
    """Test that two shared-control groups collapse into one bucket"""
    instrs = [cnot(0, 1), cnot(2, 3), cnot(0, 4), cnot(2, 5)]
    instrs = [ins.with_uid(k) for k, ins in enumerate(instrs)]
    groups = [
        MergeGroup(GroupKind.SHARED_CONTROL, (0, 2), pivot=0),
        MergeGroup(GroupKind.SHARED_CONTROL, (1, 3), pivot=2),
    ]
    bucketed = rebucketize(instrs, groups)
    assert len(bucketed) == 1
    assert bucketed.buckets[0].joint_groups == tuple(groups)
    assert bucketed.groups() == groups
    assert bucketed.qubit_count == 6


def test_rebucketize_detects_interleaving():
    """Test that a dependency between group members is an atomicity violation"""
    instrs = [cnot(0, 1), gate(GateKind.H, 0), cnot(0, 2)]
    instrs = [ins.with_uid(k) for k, ins in enumerate(instrs)]
    with pytest.raises(AtomicityViolationError):
        rebucketize(instrs, [MergeGroup(GroupKind.SHARED_CONTROL, (0, 2), pivot=0)])


def test_rebucketize_rejects_bad_groups():
    """Test overlapping groups and unnumbered instructions"""
    instrs = [cnot(0, 1).with_uid(0), cnot(0, 2).with_uid(1), cnot(0, 3).with_uid(2)]
    with pytest.raises(ValueError):
        rebucketize(
            instrs,
            [
                MergeGroup(GroupKind.SHARED_CONTROL, (0, 1), pivot=0),
                MergeGroup(GroupKind.SHARED_CONTROL, (1, 2), pivot=0),
            ],
        )
    with pytest.raises(ValueError):
        rebucketize([cnot(0, 1), cnot(0, 2)], [MergeGroup(GroupKind.SHARED_CONTROL, (0, 1), pivot=0)])
    with pytest.raises(ValueError):
        rebucketize(instrs, [MergeGroup(GroupKind.SHARED_CONTROL, (0, 9), pivot=0)])


def test_remove_empty():
    """Test that empty buckets are dropped in order"""
    a = Bucket((gate(GateKind.H, 0).with_uid(0),))
    b = Bucket((gate(GateKind.H, 1).with_uid(1),))
    bucketed = BucketedCircuit((a, Bucket(), b, Bucket()), qubit_count=2)
    cleaned = remove_empty(bucketed)
    assert cleaned.buckets == (a, b)
    assert remove_empty(cleaned) is cleaned
