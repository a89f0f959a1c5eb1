"""Unitary matrices of the supported gate set."""

import numpy as np

from circuit_ir import GateKind, Instruction, SimulationError

_SQRT_HALF = 1.0 / np.sqrt(2.0)

FIXED_1Q: dict[GateKind, np.ndarray] = {
    GateKind.H: np.array([[1, 1], [1, -1]], dtype=complex) * _SQRT_HALF,
    GateKind.X: np.array([[0, 1], [1, 0]], dtype=complex),
    GateKind.Y: np.array([[0, -1j], [1j, 0]], dtype=complex),
    GateKind.Z: np.diag([1, -1]).astype(complex),
    GateKind.S: np.diag([1, 1j]).astype(complex),
    GateKind.SDG: np.diag([1, -1j]).astype(complex),
    GateKind.T: np.diag([1, np.exp(1j * np.pi / 4)]).astype(complex),
    GateKind.TDG: np.diag([1, np.exp(-1j * np.pi / 4)]).astype(complex),
}

FIXED_2Q: dict[GateKind, np.ndarray] = {
    GateKind.CNOT: np.array(
        [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
    ).reshape(2, 2, 2, 2),
    GateKind.CZ: np.diag([1, 1, 1, -1]).astype(complex).reshape(2, 2, 2, 2),
    GateKind.SWAP: np.array(
        [[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], dtype=complex
    ).reshape(2, 2, 2, 2),
}


def rotation(kind: GateKind, theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    if kind is GateKind.RZ:
        return np.diag([np.exp(-1j * theta / 2), np.exp(1j * theta / 2)])
    if kind is GateKind.RX:
        return np.array([[c, -1j * s], [-1j * s, c]], dtype=complex)
    if kind is GateKind.RY:
        return np.array([[c, -s], [s, c]], dtype=complex)
    raise SimulationError(f"{kind.value} is not a rotation")


def unitary(ins: Instruction) -> np.ndarray:
    """Matrix of a unitary instruction: shape (2, 2) or (2, 2, 2, 2)."""
    if ins.kind in FIXED_1Q:
        return FIXED_1Q[ins.kind]
    if ins.kind in FIXED_2Q:
        return FIXED_2Q[ins.kind]
    if ins.kind.param_count:
        return rotation(ins.kind, ins.params[0])
    raise SimulationError(f"no unitary for gate '{ins.kind.value}'")
