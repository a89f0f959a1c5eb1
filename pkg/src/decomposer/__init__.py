"""Logical to physical decomposition of bucketed circuits."""

from .compiler import compile_circuit, default_layout, parallel_threshold
from .grouping import annotate_buckets, group_bucket
from .physical import (
    BitAllocator,
    Block,
    PhysicalCircuit,
    check_electron_hygiene,
    check_no_remote_gates,
)
from .protocols import (
    build_ghz,
    decompose_naive_cnot,
    decompose_naive_cz,
    decompose_shared_control,
    decompose_shared_target,
)

__all__ = [
    "BitAllocator",
    "Block",
    "PhysicalCircuit",
    "annotate_buckets",
    "build_ghz",
    "check_electron_hygiene",
    "check_no_remote_gates",
    "compile_circuit",
    "decompose_naive_cnot",
    "decompose_naive_cz",
    "decompose_shared_control",
    "decompose_shared_target",
    "default_layout",
    "group_bucket",
    "parallel_threshold",
]
