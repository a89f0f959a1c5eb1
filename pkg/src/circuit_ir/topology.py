"""Hardware topology, physical qubit addressing and logical placement."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Iterator, Optional

from .errors import PlacementError


class Role(str, Enum):
    """Role of a physical qubit inside a node."""

    COMMUNICATION = "e"
    MEMORY = "m"


@dataclass(frozen=True, order=True)
class QubitRef:
    """A physical qubit: node index, role and local index."""

    node: int
    role: Role
    local_index: int = 0

    @classmethod
    def comm(cls, node: int) -> "QubitRef":
        return cls(node, Role.COMMUNICATION, 0)

    @classmethod
    def memory(cls, node: int, index: int) -> "QubitRef":
        return cls(node, Role.MEMORY, index)

    @property
    def is_comm(self) -> bool:
        return self.role is Role.COMMUNICATION

    def __str__(self) -> str:
        return f"n{self.node}.{self.role.value}{self.local_index}"


@dataclass(frozen=True)
class NodeTopology:
    """Nodes with one communication qubit and a bank of memory qubits.

    Connectivity is all-to-all: any two communication qubits can share an
    EPR pair.
    """

    node_count: int
    memory_per_node: int = 4
    all_to_all: bool = True

    def __post_init__(self) -> None:
        if self.node_count < 1:
            raise ValueError(f"node_count must be >= 1, got {self.node_count}")
        if self.memory_per_node < 1:
            raise ValueError(f"memory_per_node must be >= 1, got {self.memory_per_node}")
        if not self.all_to_all:
            raise ValueError("only all-to-all connectivity is supported")

    def contains(self, qubit: QubitRef) -> bool:
        """Check a physical address against the topology bounds."""
        if not 0 <= qubit.node < self.node_count:
            return False
        if qubit.is_comm:
            return qubit.local_index == 0
        return 0 <= qubit.local_index < self.memory_per_node

    def comm_qubits(self) -> Iterator[QubitRef]:
        for node in range(self.node_count):
            yield QubitRef.comm(node)


@dataclass(frozen=True)
class Placement:
    """Injective map from logical qubit index to a memory qubit."""

    slots: tuple[QubitRef, ...]

    def __post_init__(self) -> None:
        if len(set(self.slots)) != len(self.slots):
            raise PlacementError("placement maps two logical qubits onto one memory qubit")
        for logical, ref in enumerate(self.slots):
            if ref.role is not Role.MEMORY:
                raise PlacementError(f"logical qubit {logical} placed on non-memory qubit {ref}")

    @classmethod
    def one_per_node(cls, qubit_count: int) -> "Placement":
        """Logical qubit i on node i, memory slot 0."""
        return cls(tuple(QubitRef.memory(i, 0) for i in range(qubit_count)))

    @classmethod
    def packed(cls, qubit_count: int, qubits_per_node: int) -> "Placement":
        """Fill each node with ``qubits_per_node`` logical qubits before moving on."""
        if qubits_per_node < 1:
            raise PlacementError("qubits_per_node must be >= 1")
        return cls(tuple(
            QubitRef.memory(i // qubits_per_node, i % qubits_per_node)
            for i in range(qubit_count)
        ))

    def __getitem__(self, logical: int) -> QubitRef:
        try:
            return self.slots[logical]
        except IndexError:
            raise PlacementError(f"logical qubit {logical} has no placement") from None

    def __len__(self) -> int:
        return len(self.slots)

    def node_of(self, logical: int) -> int:
        return self[logical].node

    @property
    def node_span(self) -> int:
        """Number of nodes needed to host this placement."""
        return max((ref.node for ref in self.slots), default=-1) + 1

    def check_against(self, topology: NodeTopology) -> None:
        """Raise PlacementError if any slot falls outside the topology."""
        for logical, ref in enumerate(self.slots):
            if not topology.contains(ref):
                raise PlacementError(
                    f"logical qubit {logical} placed on {ref}, outside topology "
                    f"({topology.node_count} nodes x {topology.memory_per_node} memory)"
                )

    def free_memory_slots(self, node: int, topology: NodeTopology) -> list[int]:
        """Memory indices on ``node`` not holding a logical qubit, ascending."""
        used = {ref.local_index for ref in self.slots if ref.node == node}
        return [i for i in range(topology.memory_per_node) if i not in used]

    def buffer_for(self, node: int, topology: NodeTopology) -> Optional[QubitRef]:
        """Highest free memory slot on ``node``, or None when the node is full."""
        free = self.free_memory_slots(node, topology)
        if not free:
            return None
        return QubitRef.memory(node, free[-1])
