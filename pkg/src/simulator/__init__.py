"""Statevector oracle and equivalence checking for compiled circuits."""

from .equivalence import EquivalenceReport, check_equivalence, equivalence_inputs
from .statevector import (
    Branch,
    BranchingSimulator,
    deferred_measurement,
    reduced_pure_state,
    simulate,
    state_fidelity,
)

__all__ = [
    "Branch",
    "BranchingSimulator",
    "EquivalenceReport",
    "check_equivalence",
    "deferred_measurement",
    "equivalence_inputs",
    "reduced_pure_state",
    "simulate",
    "state_fidelity",
]
