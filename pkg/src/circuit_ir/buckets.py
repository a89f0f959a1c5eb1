"""Buckets, bucketed circuits and merge-group annotations."""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence

from .instructions import Instruction, Qubit


class Mode(str, Enum):
    """Optimization regime."""

    NAIVE = "naive"
    CONSERVATIVE = "conservative"
    RELAXED = "relaxed"


class GroupKind(str, Enum):
    SHARED_CONTROL = "shared_control"
    SHARED_TARGET = "shared_target"
    INDEPENDENT = "independent"

    @property
    def is_shared(self) -> bool:
        return self is not GroupKind.INDEPENDENT


@dataclass(frozen=True)
class MergeGroup:
    """CNOTs of one bucket decomposed together.

    ``members`` are instruction uids; ``pivot`` is the shared control or
    target qubit (None for independent groups).
    """

    kind: GroupKind
    members: tuple[int, ...]
    pivot: Optional[Qubit] = None

    def __post_init__(self) -> None:
        if not self.members:
            raise ValueError("merge group needs at least one member")
        if self.kind.is_shared and self.pivot is None:
            raise ValueError(f"{self.kind.value} group needs a pivot qubit")

    @property
    def size(self) -> int:
        return len(self.members)

    def extended(self, uids: Sequence[int]) -> "MergeGroup":
        return replace(self, members=tuple(sorted(set(self.members) | set(uids))))

    def describe(self) -> str:
        if self.kind.is_shared:
            return f"{self.kind.value}({self.pivot}):{self.size}"
        return f"independent:{self.size}"


@dataclass(frozen=True)
class Bucket:
    """Instructions scheduled in one layer.

    ``joint_groups`` is None until the bucket has been annotated for
    decomposition.
    """

    instructions: tuple[Instruction, ...] = ()
    joint_groups: Optional[tuple[MergeGroup, ...]] = None

    def __len__(self) -> int:
        return len(self.instructions)

    @property
    def cnots(self) -> list[Instruction]:
        return [ins for ins in self.instructions if ins.is_cnot]

    def by_uid(self) -> dict[int, Instruction]:
        return {ins.uid: ins for ins in self.instructions}


@dataclass(frozen=True)
class BucketedCircuit:
    """Ordered buckets; flattening them yields a legal instruction order."""

    buckets: tuple[Bucket, ...]
    qubit_count: int
    classical_bit_count: int = 0

    def __len__(self) -> int:
        return len(self.buckets)

    def flatten(self) -> list[Instruction]:
        return [ins for bucket in self.buckets for ins in bucket.instructions]

    def groups(self) -> list[MergeGroup]:
        """All shared groups annotated on the buckets."""
        found: list[MergeGroup] = []
        for bucket in self.buckets:
            for group in bucket.joint_groups or ():
                if group.kind.is_shared:
                    found.append(group)
        return found


def flatten(bucketed: BucketedCircuit) -> list[Instruction]:
    """Instruction sequence of a bucketed circuit in bucket order."""
    return bucketed.flatten()
