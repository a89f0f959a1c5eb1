"""Dense statevector simulation with exhaustive measurement-branch enumeration.

States are held as a batch: an array of shape ``(batch, 2, ..., 2)`` with one
axis per simulated qubit, so a single branch enumeration covers every input
state at once. Measurement forks a branch into an outcome-0 and an outcome-1
child; each child carries a per-input probability and a per-input
renormalized state. A child is pruned only when it has zero weight for every
input in the batch.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence, Union

import numpy as np

from circuit_ir import (
    SINGLE_QUBIT_UNITARIES,
    GateKind,
    Instruction,
    InvariantViolation,
    Qubit,
    SimulationError,
)

from .gates import FIXED_1Q, FIXED_2Q, unitary

logger = logging.getLogger(__name__)

MAX_QUBITS = 16
FIDELITY_TOLERANCE = 1e-9
NORM_TOLERANCE = 1e-9
# Below this a fork child is treated as impossible for that input.
ZERO_WEIGHT = 1e-12
# Second singular value under which a qubit counts as unentangled.
PRODUCT_TOLERANCE = 1e-8


@dataclass
class Branch:
    """One measurement-outcome path (or several merged identical ones).

    ``amplitude_vector`` has shape ``(2**n,)`` for a single input and
    ``(batch, 2**n)`` for a batch; ``probability`` is a float or a
    ``(batch,)`` array accordingly. Amplitudes are ordered with the first
    qubit of the simulation order as the most significant bit.
    """

    outcome_record: tuple[tuple[int, int], ...]
    amplitude_vector: np.ndarray
    probability: Union[float, np.ndarray]
    multiplicity: int = 1

    def outcomes(self) -> dict[int, int]:
        return dict(self.outcome_record)


@dataclass
class _Path:
    psi: np.ndarray
    weight: np.ndarray
    record: dict[int, int] = field(default_factory=dict)
    multiplicity: int = 1

    @property
    def support(self) -> np.ndarray:
        return self.weight > 0


def _instructions(circuit: Any) -> Sequence[Instruction]:
    return getattr(circuit, "instructions", circuit)


def default_qubit_order(circuit: Any) -> list[Qubit]:
    """Logical circuits use ``0..qubit_count-1``; anything else its used qubits, sorted."""
    count = getattr(circuit, "qubit_count", None)
    if count is not None:
        return list(range(count))
    used = {q for ins in _instructions(circuit) for q in ins.operands}
    return sorted(used)


def _future_reads(instrs: Sequence[Instruction]) -> list[frozenset[int]]:
    """For each position, the classical bits read strictly after it."""
    reads: list[frozenset[int]] = [frozenset()] * len(instrs)
    acc: frozenset[int] = frozenset()
    for pos in range(len(instrs) - 1, -1, -1):
        reads[pos] = acc
        acc = acc | instrs[pos].reads
    return reads


class BranchingSimulator:
    """Batched statevector engine over a fixed qubit order."""

    def __init__(self, qubit_order: Sequence[Qubit]):
        if len(qubit_order) > MAX_QUBITS:
            raise SimulationError(f"{len(qubit_order)} qubits exceed the {MAX_QUBITS}-qubit limit")
        if len(set(qubit_order)) != len(qubit_order):
            raise SimulationError("qubit order lists a qubit twice")
        self.qubit_order = list(qubit_order)
        self.axis = {q: k + 1 for k, q in enumerate(self.qubit_order)}

    @property
    def qubit_count(self) -> int:
        return len(self.qubit_order)

    def initial(self, states: np.ndarray) -> _Path:
        """Wrap a ``(batch, 2**n)`` array of normalized input states."""
        dim = 2 ** self.qubit_count
        if states.ndim != 2 or states.shape[1] != dim:
            raise SimulationError(f"input states must have dimension {dim}, got shape {states.shape}")
        norms = np.linalg.norm(states, axis=1)
        if np.any(np.abs(norms - 1.0) > NORM_TOLERANCE):
            raise SimulationError("input states must be normalized")
        psi = states.astype(complex).reshape((states.shape[0],) + (2,) * self.qubit_count)
        return _Path(psi, np.ones(states.shape[0]))

    def run(self, instrs: Sequence[Instruction], states: np.ndarray) -> list[_Path]:
        paths = [self.initial(states)]
        future = _future_reads(instrs)
        for pos, ins in enumerate(instrs):
            paths = [child for path in paths for child in self.step(path, ins)]
            if len(paths) > 1:
                paths = self.merge(paths, future[pos])
            self._check_norms(paths, pos, ins)
        logger.debug("Simulated %d instructions into %d branches", len(instrs), len(paths))
        return paths

    # Instruction dispatch

    def step(self, path: _Path, ins: Instruction) -> list[_Path]:
        kind = ins.kind
        for q in ins.operands:
            if q not in self.axis:
                raise SimulationError(f"'{ins}' acts on {q}, which is not simulated")
        if ins.condition is not None:
            missing = sorted(b for b in ins.condition.bits if b not in path.record)
            if missing:
                raise SimulationError(f"'{ins}' reads unmeasured bits {missing}")
            if not ins.condition.holds(path.record):
                return [path]
        if kind is GateKind.BARRIER:
            return [path]
        if kind in SINGLE_QUBIT_UNITARIES:
            path.psi = self._apply_1q(path.psi, unitary(ins), ins.operands[0])
            return [path]
        if kind in (GateKind.CNOT, GateKind.CZ, GateKind.SWAP):
            path.psi = self._apply_2q(path.psi, unitary(ins), *ins.operands)
            return [path]
        if kind is GateKind.MEASURE_Z:
            return self.measure(path, ins.operands[0], ins.writes)
        if kind is GateKind.MEASURE_X:
            q = ins.operands[0]
            path.psi = self._apply_1q(path.psi, FIXED_1Q[GateKind.H], q)
            children = self.measure(path, q, ins.writes)
            for child in children:
                child.psi = self._apply_1q(child.psi, FIXED_1Q[GateKind.H], q)
            return children
        if kind is GateKind.RESET:
            return self.reset(path, ins.operands[0])
        if kind is GateKind.EPR:
            a, b = ins.operands
            paths = [r for p in self.reset(path, a) for r in self.reset(p, b)]
            for p in paths:
                p.psi = self._apply_1q(p.psi, FIXED_1Q[GateKind.H], a)
                p.psi = self._apply_2q(p.psi, FIXED_2Q[GateKind.CNOT], a, b)
            return paths
        raise SimulationError(f"unsupported gate '{kind.value}'")

    def _apply_1q(self, psi: np.ndarray, matrix: np.ndarray, q: Qubit) -> np.ndarray:
        axis = self.axis[q]
        out = np.tensordot(matrix, psi, axes=([1], [axis]))
        return np.moveaxis(out, 0, axis)

    def _apply_2q(self, psi: np.ndarray, matrix: np.ndarray, a: Qubit, b: Qubit) -> np.ndarray:
        axes = [self.axis[a], self.axis[b]]
        out = np.tensordot(matrix, psi, axes=([2, 3], axes))
        return np.moveaxis(out, [0, 1], axes)

    def _weights(self, psi: np.ndarray) -> np.ndarray:
        return np.sum(np.abs(psi) ** 2, axis=tuple(range(1, psi.ndim)))

    def _project(self, path: _Path, q: Qubit, outcome: int) -> tuple[np.ndarray, np.ndarray]:
        """Renormalized projection onto ``outcome`` and its per-input probability."""
        index: list[Any] = [slice(None)] * path.psi.ndim
        index[self.axis[q]] = 1 - outcome
        projected = path.psi.copy()
        projected[tuple(index)] = 0
        prob = self._weights(projected)
        prob = np.where(prob > ZERO_WEIGHT, prob, 0.0)
        scale = np.zeros_like(prob)
        np.divide(1.0, np.sqrt(prob), out=scale, where=prob > 0)
        projected *= scale.reshape((-1,) + (1,) * self.qubit_count)
        return projected, prob

    def _fork(self, path: _Path, q: Qubit) -> list[tuple[int, _Path]]:
        children: list[tuple[int, _Path]] = []
        for outcome in (0, 1):
            psi, prob = self._project(path, q, outcome)
            weight = path.weight * prob
            if not np.any(weight > 0):
                continue
            children.append((outcome, _Path(psi, weight, dict(path.record), path.multiplicity)))
        return children

    def measure(self, path: _Path, q: Qubit, bit: Optional[int]) -> list[_Path]:
        """Z-basis measurement: outcome 0 child first, then outcome 1."""
        children = self._fork(path, q)
        for outcome, child in children:
            if bit is not None:
                child.record[bit] = outcome
        return [child for _, child in children]

    def reset(self, path: _Path, q: Qubit) -> list[_Path]:
        """Zero ``q``; in place when it is unentangled, otherwise after an unrecorded fork."""
        axis = self.axis[q]
        moved = np.moveaxis(path.psi, axis, -1)
        matrix = moved.reshape(moved.shape[0], -1, 2)
        _, singular, vh = np.linalg.svd(matrix, full_matrices=False)
        if np.all(singular[:, 1:] < PRODUCT_TOLERANCE):
            rest = np.einsum("bri,bi->br", matrix, vh[:, 0, :].conj())
            zeroed = np.zeros_like(matrix)
            zeroed[:, :, 0] = rest
            path.psi = np.moveaxis(zeroed.reshape(moved.shape), -1, axis)
            return [path]
        children = []
        for outcome, child in self._fork(path, q):
            if outcome:
                child.psi = self._apply_1q(child.psi, FIXED_1Q[GateKind.X], q)
            children.append(child)
        return children

    # Branch bookkeeping

    def _fidelities(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        flat_a = a.reshape(a.shape[0], -1)
        flat_b = b.reshape(b.shape[0], -1)
        return np.abs(np.sum(flat_a.conj() * flat_b, axis=1)) ** 2

    def merge(self, paths: list[_Path], relevant: frozenset[int]) -> list[_Path]:
        """Merge paths that agree on every bit still to be read and hold the same state."""
        merged: list[_Path] = []
        for path in paths:
            key = {b: path.record.get(b) for b in relevant}
            for other in merged:
                if {b: other.record.get(b) for b in relevant} != key:
                    continue
                if not np.array_equal(other.support, path.support):
                    continue
                fid = self._fidelities(other.psi, path.psi)[path.support]
                if np.all(fid >= 1.0 - FIDELITY_TOLERANCE):
                    other.weight = other.weight + path.weight
                    other.multiplicity += path.multiplicity
                    other.record = {b: v for b, v in other.record.items() if path.record.get(b) == v}
                    break
            else:
                merged.append(path)
        return merged

    def _check_norms(self, paths: list[_Path], pos: int, ins: Instruction) -> None:
        for path in paths:
            norms = np.sqrt(self._weights(path.psi))[path.support]
            if np.any(np.abs(norms - 1.0) > NORM_TOLERANCE):
                raise InvariantViolation("norm preservation", f"after instruction {pos} '{ins}'")


def _as_batch(input_state: Optional[np.ndarray], qubit_count: int) -> tuple[np.ndarray, bool]:
    dim = 2 ** qubit_count
    if input_state is None:
        state = np.zeros((1, dim), dtype=complex)
        state[0, 0] = 1.0
        return state, False
    array = np.asarray(input_state, dtype=complex)
    if array.ndim == 1:
        return array.reshape(1, -1), False
    return array, True


def simulate(
    circuit: Any,
    input_state: Optional[np.ndarray] = None,
    qubit_order: Optional[Sequence[Qubit]] = None,
) -> list[Branch]:
    """Run a logical or physical circuit and enumerate every measurement branch.

    Args:
        circuit: ``LogicalCircuit``, ``PhysicalCircuit`` or an instruction sequence.
        input_state: Vector of dimension ``2**n``, or a ``(batch, 2**n)``
            array; defaults to all zeros.
        qubit_order: Simulated qubits, most significant first.

    Returns:
        Branches in deterministic order (outcome 0 before outcome 1).

    Raises:
        SimulationError: More than 16 qubits, an unsimulated operand, a read
            of an unmeasured bit or an unsupported gate.
    """
    order = list(qubit_order) if qubit_order is not None else default_qubit_order(circuit)
    engine = BranchingSimulator(order)
    states, batched = _as_batch(input_state, engine.qubit_count)
    paths = engine.run(_instructions(circuit), states)
    branches = []
    for path in paths:
        vectors = path.psi.reshape(path.psi.shape[0], -1)
        branches.append(Branch(
            outcome_record=tuple(path.record.items()),
            amplitude_vector=vectors if batched else vectors[0],
            probability=path.weight if batched else float(path.weight[0]),
            multiplicity=path.multiplicity,
        ))
    return branches


def state_fidelity(a: np.ndarray, b: np.ndarray) -> float:
    """``|<a|b>|**2``; insensitive to global phase.

    Raises:
        ValueError: The states have different dimensions.
    """
    a = np.asarray(a, dtype=complex).ravel()
    b = np.asarray(b, dtype=complex).ravel()
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.size} vs {b.size}")
    return float(min(1.0, abs(np.vdot(a, b)) ** 2))


def reduced_pure_state(vector: np.ndarray, keep: Sequence[int], qubit_count: int) -> tuple[np.ndarray, float]:
    """Factor the qubits at positions ``keep`` out of a pure state.

    Returns:
        The dominant pure state of the kept qubits and the weight of the
        remainder (0 when the kept qubits are unentangled with the rest).
    """
    tensor = np.asarray(vector, dtype=complex).reshape((2,) * qubit_count)
    rest = [k for k in range(qubit_count) if k not in keep]
    matrix = np.transpose(tensor, list(keep) + rest).reshape(2 ** len(keep), -1)
    u, singular, _ = np.linalg.svd(matrix, full_matrices=False)
    return u[:, 0], float(np.sum(singular[1:] ** 2))


def deferred_measurement(instrs: Sequence[Instruction]) -> list[Instruction]:
    """Replace measurements and classically controlled Paulis by controlled gates.

    A Z measurement is dropped, an X measurement becomes H, and an X or Z
    conditioned on bits becomes one CNOT or CZ from each measured qubit
    (plus an unconditional Pauli when the condition parity is 0). RESET of
    a measured qubit is dropped. The result has no measurements, so it
    simulates into a single branch.

    Raises:
        SimulationError: A measured qubit is reused, or a condition reads an
            unmeasured bit or guards something other than X or Z.
    """
    source: dict[int, Qubit] = {}
    retired: set[Qubit] = set()
    out: list[Instruction] = []
    for ins in instrs:
        if ins.condition is not None:
            controlled = {GateKind.X: GateKind.CNOT, GateKind.Z: GateKind.CZ}.get(ins.kind)
            if controlled is None:
                raise SimulationError(f"cannot defer a measurement feeding '{ins}'")
            target = ins.operands[0]
            if target in retired:
                raise SimulationError(f"'{ins}' acts on a measured qubit")
            for bit in sorted(ins.condition.bits):
                if bit not in source:
                    raise SimulationError(f"'{ins}' reads unmeasured bit {bit}")
                out.append(Instruction(controlled, (source[bit], target)))
            if ins.condition.parity == 0:
                out.append(Instruction(ins.kind, (target,)))
            continue
        if ins.kind.is_measurement:
            q = ins.operands[0]
            if ins.kind is GateKind.MEASURE_X:
                out.append(Instruction(GateKind.H, (q,)))
            if ins.writes is not None:
                source[ins.writes] = q
            retired.add(q)
            continue
        if ins.kind is GateKind.RESET and ins.operands[0] in retired:
            continue
        reused = [q for q in ins.operands if q in retired]
        if reused and ins.kind is not GateKind.BARRIER:
            raise SimulationError(f"'{ins}' reuses measured qubit {reused[0]}")
        out.append(ins)
    return out
