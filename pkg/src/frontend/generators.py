"""Benchmark circuit families: Bernstein-Vazirani, Deutsch-Jozsa and seeded random circuits."""

import logging
import math
from typing import Optional

import numpy as np

from circuit_ir import (
    CONTROL_COMMUTING,
    GateKind,
    GeneratorError,
    Instruction,
    cnot,
    gate,
    measure,
)

from .circuit import LogicalCircuit

logger = logging.getLogger(__name__)

PATTERNS = ("uniform", "fanout_heavy", "fanin_heavy")
ORACLES = ("constant0", "constant1", "balanced")

# Unitary part of the logical gate set, drawn with equal weight.
_UNIFORM_KINDS = (
    GateKind.H, GateKind.X, GateKind.Y, GateKind.Z, GateKind.S, GateKind.SDG,
    GateKind.T, GateKind.TDG, GateKind.RZ, GateKind.RX, GateKind.RY,
    GateKind.CNOT, GateKind.CZ,
)
_CONTROL_FILLERS = tuple(sorted(CONTROL_COMMUTING, key=lambda k: k.value))
_TARGET_FILLERS = (GateKind.X, GateKind.RX)

RUN_PROBABILITY = 0.3
INTERLEAVE_PROBABILITY = 0.15
RUN_LENGTHS = (3, 5)


def _bitstring(value: str, n: int, what: str) -> str:
    if len(value) != n or any(ch not in "01" for ch in value):
        raise GeneratorError(f"{what} must be a {n}-bit string of 0/1, got {value!r}")
    return value


def _oracle_frame(n: int, oracle: list[Instruction], name: str) -> LogicalCircuit:
    """H on data, X then H on ancilla ``n``, oracle, H on data, measure data."""
    instrs: list[Instruction] = [gate(GateKind.H, q) for q in range(n)]
    instrs.append(gate(GateKind.X, n))
    instrs.append(gate(GateKind.H, n))
    instrs.extend(oracle)
    instrs.extend(gate(GateKind.H, q) for q in range(n))
    instrs.extend(measure(q, q) for q in range(n))
    return LogicalCircuit(n + 1, tuple(instrs), name, n)


def gen_bv(n: int, secret: str) -> LogicalCircuit:
    """Bernstein-Vazirani over ``n`` data qubits and ancilla ``n``.

    Character i of ``secret`` set means CNOT(i, n).
    """
    if n < 1:
        raise GeneratorError(f"BV needs at least one data qubit, got {n}")
    _bitstring(secret, n, "secret")
    oracle = [cnot(i, n) for i, bit in enumerate(secret) if bit == "1"]
    return _oracle_frame(n, oracle, f"bv_{n}_{secret}")


def parse_oracle(n: int, oracle: str) -> tuple[str, Optional[str]]:
    """Split an oracle string into kind and mask.

    Accepts ``constant0``, ``constant1``, ``balanced`` (all-ones mask),
    ``balanced:<mask>`` and ``balanced(<mask>)``.
    """
    text = oracle.strip()
    if text in ("constant0", "constant1"):
        return text, None
    if text == "balanced":
        return "balanced", "1" * n
    for prefix, suffix in (("balanced:", ""), ("balanced(", ")")):
        if text.startswith(prefix) and text.endswith(suffix):
            mask = text[len(prefix):len(text) - len(suffix)]
            _bitstring(mask, n, "balanced mask")
            if "1" not in mask:
                raise GeneratorError("balanced mask needs at least one set bit")
            return "balanced", mask
    raise GeneratorError(f"unknown oracle {oracle!r}; expected one of {', '.join(ORACLES)}")


def gen_dj(n: int, oracle: str) -> LogicalCircuit:
    """Deutsch-Jozsa with a constant or balanced-parity oracle."""
    if n < 1:
        raise GeneratorError(f"DJ needs at least one data qubit, got {n}")
    kind, mask = parse_oracle(n, oracle)
    if kind == "constant0":
        body: list[Instruction] = []
        label = kind
    elif kind == "constant1":
        body = [gate(GateKind.X, n)]
        label = kind
    else:
        body = [cnot(i, n) for i, bit in enumerate(mask) if bit == "1"]
        label = f"balanced{mask}"
    return _oracle_frame(n, body, f"dj_{n}_{label}")


class _RandomCircuitBuilder:
    def __init__(self, n: int, rng: np.random.Generator):
        self.n = n
        self.rng = rng
        self.instrs: list[Instruction] = []

    def angle(self) -> float:
        return float(self.rng.uniform(0.0, 2.0 * math.pi))

    def single(self, kind: GateKind, qubit: int) -> Instruction:
        params = (self.angle(),) if kind.param_count else ()
        return gate(kind, qubit, params=params)

    def uniform_gate(self) -> None:
        kind = _UNIFORM_KINDS[int(self.rng.integers(len(_UNIFORM_KINDS)))]
        if kind.arity == 2:
            a, b = (int(q) for q in self.rng.choice(self.n, size=2, replace=False))
            self.instrs.append(gate(kind, a, b))
        else:
            self.instrs.append(self.single(kind, int(self.rng.integers(self.n))))

    def run(self, shared_control: bool) -> None:
        """A run of CNOTs sharing one qubit, with commuting fillers between members."""
        pivot = int(self.rng.integers(self.n))
        others = [q for q in range(self.n) if q != pivot]
        low, high = RUN_LENGTHS
        length = min(int(self.rng.integers(low, high + 1)), len(others))
        partners = [int(q) for q in self.rng.choice(others, size=length, replace=False)]
        fillers = _CONTROL_FILLERS if shared_control else _TARGET_FILLERS
        for k, partner in enumerate(partners):
            if k and self.rng.random() < INTERLEAVE_PROBABILITY:
                kind = fillers[int(self.rng.integers(len(fillers)))]
                self.instrs.append(self.single(kind, pivot))
            self.instrs.append(cnot(pivot, partner) if shared_control else cnot(partner, pivot))


def gen_random(n: int, gate_count: int, seed: int, pattern: str = "uniform") -> LogicalCircuit:
    """Seeded random logical circuit.

    ``uniform`` draws every gate independently from the unitary logical
    gate set. ``fanout_heavy`` and ``fanin_heavy`` start, with probability
    RUN_PROBABILITY per step, a run of 3 to 5 CNOTs sharing a control
    (resp. target), occasionally separated by gates that commute with the
    shared role.

    Raises:
        GeneratorError: n < 2, gate_count < 1 or an unknown pattern.
    """
    if n < 2:
        raise GeneratorError(f"random circuits need at least 2 qubits, got {n}")
    if gate_count < 1:
        raise GeneratorError(f"gate_count must be >= 1, got {gate_count}")
    if pattern not in PATTERNS:
        raise GeneratorError(f"unknown pattern {pattern!r}; expected one of {', '.join(PATTERNS)}")

    builder = _RandomCircuitBuilder(n, np.random.default_rng(seed))
    while len(builder.instrs) < gate_count:
        if pattern != "uniform" and builder.rng.random() < RUN_PROBABILITY:
            builder.run(shared_control=pattern == "fanout_heavy")
        else:
            builder.uniform_gate()
    instrs = builder.instrs[:gate_count]
    logger.debug("Generated random circuit n=%d gates=%d seed=%d pattern=%s", n, gate_count, seed, pattern)
    return LogicalCircuit(n, tuple(instrs), f"random_{pattern}_{n}_{gate_count}_{seed}", 0)
