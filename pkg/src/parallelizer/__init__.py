"""Bucket-merging sweeps that form joint-execution CNOT groups."""

from circuit_ir import GroupKind, MergeGroup, Mode

from .commutation import commuting_moves
from .pipeline import min_group_size, naive_plan, optimize
from .sweeps import JoinVerdict, backward_sweep, can_join, forward_sweep

__all__ = [
    "GroupKind",
    "JoinVerdict",
    "MergeGroup",
    "Mode",
    "backward_sweep",
    "can_join",
    "commuting_moves",
    "forward_sweep",
    "min_group_size",
    "naive_plan",
    "optimize",
]
