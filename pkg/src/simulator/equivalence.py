"""Equivalence checking between a logical circuit and its compiled physical circuit."""

import logging
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from circuit_ir import GateKind, Instruction, Placement, QubitRef, SimulationError

from .statevector import FIDELITY_TOLERANCE, BranchingSimulator

logger = logging.getLogger(__name__)

MAX_LOGICAL_QUBITS = 10
DEFAULT_CHUNK = 64


@dataclass
class EquivalenceReport:
    """Worst-case agreement between the logical reference and every physical branch."""

    equivalent: bool
    worst_fidelity: float
    branch_count: int
    failing_input: Optional[str] = None
    failing_branch: Optional[tuple[tuple[int, int], ...]] = None
    diagnostics: list[str] = field(default_factory=list)
    inputs_tested: int = 0


def _logical_reference(instrs: tuple[Instruction, ...]) -> list[Instruction]:
    return [ins for ins in instrs if not ins.kind.is_measurement and ins.kind is not GateKind.BARRIER]


def _physical_body(instrs: tuple[Instruction, ...], logical_bits: int) -> list[Instruction]:
    """Physical instructions without the pass-through logical measurements and barriers."""
    body = []
    for ins in instrs:
        if ins.kind is GateKind.BARRIER:
            continue
        if ins.kind.is_measurement and ins.writes is not None and ins.writes < logical_bits:
            continue
        body.append(ins)
    return body


def equivalence_inputs(qubit_count: int, random_states: int, seed: int) -> tuple[np.ndarray, list[str]]:
    """Every computational basis state followed by seeded random states.

    Returns:
        A ``(count, 2**n)`` array and a description per row.
    """
    dim = 2 ** qubit_count
    basis = np.eye(dim, dtype=complex)
    labels = [f"basis |{k:0{qubit_count}b}>" if qubit_count else "basis |>" for k in range(dim)]
    rng = np.random.default_rng(seed)
    randoms = rng.normal(size=(random_states, dim)) + 1j * rng.normal(size=(random_states, dim))
    if random_states:
        randoms /= np.linalg.norm(randoms, axis=1, keepdims=True)
    labels += [f"random #{k} (seed {seed})" for k in range(random_states)]
    return np.vstack([basis, randoms]), labels


def _embed(inputs: np.ndarray, ancilla_count: int) -> np.ndarray:
    """Tensor each input with ``|0...0>`` on the ancillas (data qubits first)."""
    out = np.zeros((inputs.shape[0], inputs.shape[1], 2 ** ancilla_count), dtype=complex)
    out[:, :, 0] = inputs
    return out.reshape(inputs.shape[0], -1)


def check_equivalence(
    logical,
    physical,
    placement: Optional[Placement] = None,
    random_states: int = 20,
    seed: int = 0,
    chunk_size: int = DEFAULT_CHUNK,
) -> EquivalenceReport:
    """Certify that ``physical`` implements ``logical`` on every branch.

    The logical circuit, stripped of measurements and barriers, gives the
    reference state for each input. The physical circuit runs on the same
    inputs (placed on the memory qubits, all other qubits in ``|0>``) and
    every measurement branch is compared against the reference on the
    component where all non-data qubits are ``|0>``. Weight outside that
    component means an ancilla was left entangled or excited; it lowers the
    fidelity and is reported as a diagnostic.

    Args:
        logical: The ``LogicalCircuit``.
        physical: The compiled ``PhysicalCircuit``.
        placement: Logical-to-memory map; defaults to ``physical.placement``.
        random_states: Number of seeded random inputs added to the basis states.
        seed: Seed for the random inputs.
        chunk_size: Inputs simulated per batch.

    Raises:
        SimulationError: Too many qubits, or the circuits cannot be simulated.
    """
    placement = placement or physical.placement
    n = logical.qubit_count
    if n > MAX_LOGICAL_QUBITS:
        raise SimulationError(f"{n} logical qubits exceed the {MAX_LOGICAL_QUBITS}-qubit limit")
    data: list[QubitRef] = [placement[i] for i in range(n)]
    body = _physical_body(physical.instructions, physical.logical_bit_count)
    ancillas = sorted({q for ins in body for q in ins.operands} - set(data))
    logical_engine = BranchingSimulator(list(range(n)))
    physical_engine = BranchingSimulator(data + ancillas)
    reference_body = _logical_reference(logical.instructions)

    inputs, labels = equivalence_inputs(n, random_states, seed)
    worst = 1.0
    failing_input: Optional[str] = None
    failing_branch = None
    diagnostics: list[str] = []
    branch_count = 0
    data_dim = 2 ** n

    for start in range(0, inputs.shape[0], chunk_size):
        chunk = inputs[start:start + chunk_size]
        reference_paths = logical_engine.run(reference_body, chunk)
        if len(reference_paths) != 1:
            raise SimulationError("logical reference circuit must not branch")
        reference = reference_paths[0].psi.reshape(chunk.shape[0], -1)
        paths = physical_engine.run(body, _embed(chunk, len(ancillas)))
        branch_count = max(branch_count, sum(p.multiplicity for p in paths))

        for path in paths:
            states = path.psi.reshape(chunk.shape[0], data_dim, -1)
            component = states[:, :, 0]
            leakage = 1.0 - np.sum(np.abs(component) ** 2, axis=1)
            fidelity = np.abs(np.sum(reference.conj() * component, axis=1)) ** 2
            for k in np.flatnonzero(path.support):
                if leakage[k] > FIDELITY_TOLERANCE and len(diagnostics) < 10:
                    diagnostics.append(
                        f"ancilla not disentangled: leakage {leakage[k]:.3g} on {labels[start + k]}, "
                        f"branch {dict(path.record)}"
                    )
                if fidelity[k] < worst:
                    worst = float(fidelity[k])
                    failing_input = labels[start + k]
                    failing_branch = tuple(path.record.items())

    equivalent = worst >= 1.0 - FIDELITY_TOLERANCE
    if equivalent:
        failing_input, failing_branch = None, None
    logger.info(
        "Equivalence of '%s': %s (worst fidelity %.12f over %d inputs, %d branches)",
        getattr(logical, "name", "circuit"),
        "equivalent" if equivalent else "NOT equivalent",
        worst,
        inputs.shape[0],
        branch_count,
    )
    return EquivalenceReport(
        equivalent=equivalent,
        worst_fidelity=min(1.0, worst),
        branch_count=branch_count,
        failing_input=failing_input,
        failing_branch=failing_branch,
        diagnostics=diagnostics,
        inputs_tested=int(inputs.shape[0]),
    )
