"""Per-bucket grouping of CNOTs into merge groups."""

from circuit_ir import (
    Bucket,
    BucketedCircuit,
    GroupKind,
    Instruction,
    MalformedBucketError,
    MergeGroup,
)


def group_bucket(b: Bucket) -> list[MergeGroup]:
    """Partition a bucket's CNOTs into shared-control, shared-target and singleton groups.

    CNOTs are sorted by (control, target). The first remaining CNOT pulls
    in every CNOT with the same control when there are at least two,
    otherwise every CNOT with the same target, otherwise it stands alone.

    Raises:
        MalformedBucketError: two groups, or a group and another
            instruction, touch the same qubit.
    """
    cnots = sorted(b.cnots, key=lambda ins: (ins.control, ins.target))
    groups: list[MergeGroup] = []
    owner: dict[object, int] = {}
    remaining = list(cnots)
    while remaining:
        first = remaining[0]
        same_control = [g for g in remaining if g.control == first.control]
        same_target = [g for g in remaining if g.target == first.target]
        if len(same_control) >= 2:
            members, kind, pivot = same_control, GroupKind.SHARED_CONTROL, first.control
        elif len(same_target) >= 2:
            members, kind, pivot = same_target, GroupKind.SHARED_TARGET, first.target
        else:
            members, kind, pivot = [first], GroupKind.INDEPENDENT, None
        _claim(owner, members, len(groups), pivot)
        groups.append(MergeGroup(kind, tuple(g.uid for g in members), pivot))
        remaining = [g for g in remaining if g not in members]

    others = [ins for ins in b.instructions if not ins.is_cnot]
    for index, ins in enumerate(others):
        _claim(owner, [ins], ("gate", index), None)
    return groups


def _claim(owner: dict, members: list[Instruction], tag: object, pivot: object) -> None:
    """Record which group owns each qubit; a second owner means the bucket is malformed."""
    for ins in members:
        for q in ins.operands:
            if q == pivot:
                continue
            if q in owner and owner[q] != tag:
                raise MalformedBucketError(f"qubit {q} is used by more than one group in the bucket ('{ins}')")
            owner[q] = tag
    if pivot is not None:
        if pivot in owner and owner[pivot] != tag:
            raise MalformedBucketError(f"pivot qubit {pivot} is already used in the bucket")
        owner[pivot] = tag


def annotate_buckets(bucketed: BucketedCircuit) -> BucketedCircuit:
    """Complete every bucket's group annotation.

    Existing groups are kept; CNOTs they do not cover are grouped with
    ``group_bucket``.
    """
    annotated = []
    for bucket in bucketed.buckets:
        existing = tuple(bucket.joint_groups or ())
        covered = {uid for group in existing for uid in group.members}
        loose = tuple(ins for ins in bucket.instructions if ins.is_cnot and ins.uid not in covered)
        extra = tuple(group_bucket(Bucket(loose))) if loose else ()
        annotated.append(Bucket(bucket.instructions, existing + extra))
    return BucketedCircuit(tuple(annotated), bucketed.qubit_count, bucketed.classical_bit_count)
