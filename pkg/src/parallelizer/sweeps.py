"""Forward and backward bucket-merging sweeps."""

import logging
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence, Union

from circuit_ir import (
    AtomicityViolationError,
    Bucket,
    BucketedCircuit,
    GateKind,
    GroupKind,
    Instruction,
    MergeGroup,
    Mode,
    Qubit,
)
from scheduler import rebucketize

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class JoinVerdict:
    """Outcome of asking whether a CNOT can join a destination bucket."""

    joinable: bool
    kind: Optional[GroupKind] = None
    pivot: Optional[Qubit] = None
    partner: Optional[int] = None
    reason: str = ""

    @classmethod
    def blocked(cls, reason: str) -> "JoinVerdict":
        return cls(False, reason=reason)

    @classmethod
    def join(cls, kind: GroupKind, pivot: Optional[Qubit] = None, partner: Optional[int] = None) -> "JoinVerdict":
        return cls(True, kind, pivot, partner)

    @property
    def is_shared(self) -> bool:
        return self.joinable and self.kind is not None and self.kind.is_shared

    def __bool__(self) -> bool:
        return self.joinable


def _group_index(dest: Union[Bucket, Sequence[Instruction]], groups: Optional[Mapping[int, MergeGroup]]) -> dict[int, MergeGroup]:
    if groups is not None:
        return dict(groups)
    index: dict[int, MergeGroup] = {}
    for group in getattr(dest, "joint_groups", None) or ():
        for uid in group.members:
            index[uid] = group
    return index


def can_join(
    g: Instruction,
    dest: Union[Bucket, Sequence[Instruction]],
    groups: Optional[Mapping[int, MergeGroup]] = None,
) -> JoinVerdict:
    """Decide whether CNOT ``g`` may join ``dest``.

    Sharing the control with a destination CNOT (and nothing else) yields
    a shared-control join, sharing the target a shared-target join, and
    touching nothing an independent join. Any other contact blocks: a
    non-CNOT on an operand, a duplicate CNOT, a qubit used in another
    role, partners of both kinds, or a partner already grouped under the
    other kind.

    Args:
        g: The CNOT looking for a destination.
        dest: Destination bucket or its instructions.
        groups: Group membership by uid; read from ``dest.joint_groups`` if None.
    """
    instrs = dest.instructions if isinstance(dest, Bucket) else list(dest)
    membership = _group_index(dest, groups)
    c, t = g.control, g.target
    control_partners: list[Instruction] = []
    target_partners: list[Instruction] = []

    for ins in instrs:
        if ins.kind is GateKind.BARRIER:
            return JoinVerdict.blocked("destination is a barrier")
        if c not in ins.operands and t not in ins.operands:
            continue
        if not ins.is_cnot:
            return JoinVerdict.blocked(f"'{ins}' touches an operand of '{g}'")
        if ins.control == c and ins.target == t:
            return JoinVerdict.blocked(f"duplicate of '{ins}'")
        if ins.control == c and ins.target != t:
            control_partners.append(ins)
        elif ins.target == t and ins.control != c:
            target_partners.append(ins)
        else:
            return JoinVerdict.blocked(f"role clash with '{ins}'")

    if control_partners and target_partners:
        return JoinVerdict.blocked("shares the control with one CNOT and the target with another")
    if control_partners or target_partners:
        kind = GroupKind.SHARED_CONTROL if control_partners else GroupKind.SHARED_TARGET
        partners = control_partners or target_partners
        for partner in partners:
            group = membership.get(partner.uid)
            if group is not None and group.kind.is_shared and group.kind is not kind:
                return JoinVerdict.blocked(f"'{partner}' already belongs to a {group.kind.value} group")
        pivot = c if kind is GroupKind.SHARED_CONTROL else t
        return JoinVerdict.join(kind, pivot, partners[0].uid)
    return JoinVerdict.join(GroupKind.INDEPENDENT)


class _SweepState:
    """Mutable bucket lists plus shared-group bookkeeping."""

    def __init__(self, buckets: list[list[Instruction]], groups: list[MergeGroup], qubit_count: int, bits: int):
        self.buckets = buckets
        self.groups: dict[int, MergeGroup] = dict(enumerate(groups))
        self.qubit_count = qubit_count
        self.bits = bits

    @classmethod
    def of(cls, bucketed: BucketedCircuit) -> "_SweepState":
        groups = [g for g in bucketed.groups() if g.kind.is_shared]
        return cls([list(b.instructions) for b in bucketed.buckets], groups, bucketed.qubit_count, bucketed.classical_bit_count)

    def copy(self) -> "_SweepState":
        clone = _SweepState([list(b) for b in self.buckets], [], self.qubit_count, self.bits)
        clone.groups = dict(self.groups)
        return clone

    def membership(self) -> dict[int, MergeGroup]:
        return {uid: group for group in self.groups.values() for uid in group.members}

    def group_id_of(self, uid: int) -> Optional[int]:
        for gid, group in self.groups.items():
            if uid in group.members:
                return gid
        return None

    def flatten(self) -> list[Instruction]:
        return [ins for bucket in self.buckets for ins in bucket]

    def group_list(self) -> list[MergeGroup]:
        return [self.groups[gid] for gid in sorted(self.groups)]

    def depth(self) -> int:
        return len(rebucketize(self.flatten(), self.group_list(), self.qubit_count, self.bits))


@dataclass
class _Unit:
    """CNOTs that move together: one existing group or a lone CNOT."""

    members: list[Instruction]
    group_id: Optional[int] = None

    @property
    def uids(self) -> list[int]:
        return [ins.uid for ins in self.members]


def _units(state: _SweepState, index: int) -> list[_Unit]:
    units: list[_Unit] = []
    seen: set[int] = set()
    for ins in state.buckets[index]:
        if not ins.is_cnot or ins.uid in seen:
            continue
        gid = state.group_id_of(ins.uid)
        if gid is None:
            units.append(_Unit([ins]))
            seen.add(ins.uid)
            continue
        members = [m for m in state.buckets[index] if m.uid in state.groups[gid].members]
        units.append(_Unit(members, gid))
        seen.update(m.uid for m in members)
    return units


def _unit_verdict(state: _SweepState, unit: _Unit, dest: int) -> JoinVerdict:
    """Joint verdict for every member of a unit against one bucket."""
    membership = state.membership()
    verdicts = [can_join(ins, state.buckets[dest], membership) for ins in unit.members]
    for verdict in verdicts:
        if not verdict:
            return verdict
    if unit.group_id is None:
        return verdicts[0]
    group = state.groups[unit.group_id]
    if all(v.kind is GroupKind.INDEPENDENT for v in verdicts):
        return verdicts[0]
    if all(v.kind is group.kind and v.pivot == group.pivot for v in verdicts):
        return verdicts[0]
    return JoinVerdict.blocked(f"members of {group.describe()} would join under different roles")


def _find_destination(state: _SweepState, unit: _Unit, index: int, step: int) -> tuple[Optional[int], JoinVerdict]:
    """Nearest shared destination, else the nearest independent one, stopping at the first blocker."""
    independent: Optional[tuple[int, JoinVerdict]] = None
    j = index + step
    while 0 <= j < len(state.buckets):
        verdict = _unit_verdict(state, unit, j)
        if not verdict:
            break
        if verdict.is_shared:
            return j, verdict
        if independent is None:
            independent = (j, verdict)
        j += step
    if independent is not None:
        return independent
    return None, JoinVerdict.blocked("no destination")


def _place(state: _SweepState, unit: _Unit, index: int, dest: int, verdict: JoinVerdict) -> None:
    moving = set(unit.uids)
    state.buckets[index] = [ins for ins in state.buckets[index] if ins.uid not in moving]
    state.buckets[dest].extend(unit.members)
    if not verdict.is_shared:
        return
    target_gid = state.group_id_of(verdict.partner)
    if target_gid is None:
        members = [verdict.partner, *unit.uids]
        target_gid = max(state.groups, default=-1) + 1
        state.groups[target_gid] = MergeGroup(verdict.kind, tuple(sorted(members)), verdict.pivot)
    else:
        state.groups[target_gid] = state.groups[target_gid].extended(unit.uids)
    if unit.group_id is not None and unit.group_id != target_gid:
        del state.groups[unit.group_id]


def _try_move(state: _SweepState, index: int, step: int) -> Optional[_SweepState]:
    """Tentatively move every CNOT of bucket ``index``; None unless all move and one shares."""
    units = _units(state, index)
    if not units:
        return None
    trial = state.copy()
    shared = False
    for unit in units:
        dest, verdict = _find_destination(trial, unit, index, step)
        if dest is None:
            logger.debug("Bucket %d stays: '%s' %s", index, unit.members[0], verdict.reason)
            return None
        shared = shared or verdict.is_shared
        _place(trial, unit, index, dest, verdict)
    if not shared:
        return None
    return trial


def _sweep(bucketed: BucketedCircuit, mode: Mode, step: int) -> tuple[list[Instruction], list[MergeGroup]]:
    state = _SweepState.of(bucketed)
    if mode is Mode.NAIVE:
        return state.flatten(), state.group_list()
    depth = state.depth() if mode is Mode.CONSERVATIVE else None
    order = range(1, len(state.buckets)) if step < 0 else range(len(state.buckets) - 2, -1, -1)
    direction = "forward" if step < 0 else "backward"
    for index in order:
        trial = _try_move(state, index, step)
        if trial is None:
            continue
        if depth is not None:
            try:
                trial_depth = trial.depth()
            except AtomicityViolationError as exc:
                logger.debug("%s move of bucket %d rejected: %s", direction, index, exc)
                continue
            if trial_depth > depth:
                logger.debug("%s move of bucket %d rejected: depth %d > %d", direction, index, trial_depth, depth)
                continue
            depth = trial_depth
        logger.debug("%s move of bucket %d committed", direction, index)
        state = trial
    return state.flatten(), state.group_list()


def forward_sweep(bucketed: BucketedCircuit, mode: Mode = Mode.CONSERVATIVE) -> tuple[list[Instruction], list[MergeGroup]]:
    """Merge whole buckets of CNOTs into earlier buckets.

    Returns:
        The reordered instruction sequence and the shared merge groups.
    """
    return _sweep(bucketed, mode, -1)


def backward_sweep(bucketed: BucketedCircuit, mode: Mode = Mode.CONSERVATIVE) -> tuple[list[Instruction], list[MergeGroup]]:
    """Mirror of ``forward_sweep``: merge whole buckets into later buckets."""
    return _sweep(bucketed, mode, +1)
