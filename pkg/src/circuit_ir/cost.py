"""Weighted cost model for distributed CNOT constructs."""

from __future__ import annotations

from dataclasses import dataclass, fields


@dataclass(frozen=True)
class CostModel:
    """Per-construct depth weights.

    The naive protocol costs ``naive_cnot_cost`` per distributed CNOT; a
    parallel group of n gates costs
    ``parallel_base_cost + parallel_increment * (n - parallel_base_size)``.
    """

    naive_cnot_cost: int = 19
    parallel_base_cost: int = 42
    parallel_increment: int = 1
    parallel_base_size: int = 2
    min_group_size_conservative: int = 3

    def __post_init__(self) -> None:
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, int) or value < 1:
                raise ValueError(f"{f.name} must be a positive integer, got {value!r}")

    @classmethod
    def unit(cls) -> "CostModel":
        """Every construct weighs one layer."""
        return cls(1, 1, 1, 1, 1)

    def parallel_cost(self, size: int) -> int:
        if size < 2:
            raise ValueError(f"parallel groups have at least 2 gates, got {size}")
        return self.parallel_base_cost + self.parallel_increment * (size - self.parallel_base_size)

    def naive_cost(self, size: int) -> int:
        """Sequential naive cost of ``size`` distributed CNOTs."""
        return self.naive_cnot_cost * size

    def break_even(self) -> int:
        """Smallest group size whose parallel cost beats the naive chain."""
        size = 2
        while self.parallel_cost(size) >= self.naive_cost(size):
            size += 1
            if size > 10_000:
                raise ValueError("cost model never favours the parallel construction")
        return size
