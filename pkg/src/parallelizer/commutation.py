"""Commutation-aware rescheduling of single-qubit gates between CNOT runs."""

import logging
from typing import Optional

from circuit_ir import (
    CONTROL_COMMUTING,
    TARGET_COMMUTING,
    BucketedCircuit,
    Instruction,
    Qubit,
)
from scheduler import bucketize

logger = logging.getLogger(__name__)


def _role(ins: Instruction) -> Optional[str]:
    """CNOT role a single-qubit gate commutes through, if any."""
    if len(ins.operands) != 1 or ins.condition is not None:
        return None
    if ins.kind in CONTROL_COMMUTING:
        return "control"
    if ins.kind in TARGET_COMMUTING:
        return "target"
    return None


def _holds_role(ins: Instruction, qubit: Qubit, role: str) -> bool:
    if not ins.is_cnot:
        return False
    return (ins.control if role == "control" else ins.target) == qubit


def _neighbour(instrs: list[Instruction], start: int, step: int, qubit: Qubit, role: str) -> Optional[int]:
    """Nearest instruction on ``qubit`` that is not a gate commuting through ``role``."""
    k = start + step
    while 0 <= k < len(instrs):
        ins = instrs[k]
        if qubit in ins.operands and _role(ins) != role:
            return k
        k += step
    return None


def _next_move(instrs: list[Instruction]) -> Optional[tuple[list[int], int]]:
    for pos, ins in enumerate(instrs):
        role = _role(ins)
        if role is None:
            continue
        qubit = ins.operands[0]
        before = _neighbour(instrs, pos, -1, qubit, role)
        after = _neighbour(instrs, pos, +1, qubit, role)
        if before is None or after is None:
            continue
        if not (_holds_role(instrs[before], qubit, role) and _holds_role(instrs[after], qubit, role)):
            continue
        run = [k for k in range(before + 1, after) if qubit in instrs[k].operands]
        return run, after
    return None


def commuting_moves(bucketed: BucketedCircuit) -> BucketedCircuit:
    """Push commuting single-qubit gates out from between CNOTs that share their qubit.

    Diagonal gates sitting on a qubit between two CNOTs that both use it
    as control, and X/RX between two CNOTs that both use it as target, are
    moved to just after the second CNOT. Repeats until nothing moves, then
    re-bucketizes.
    """
    instrs = bucketed.flatten()
    moves = 0
    while True:
        found = _next_move(instrs)
        if found is None:
            break
        run, after = found
        moved = [instrs[k] for k in run]
        skip = set(run)
        rest = [ins for k, ins in enumerate(instrs) if k not in skip]
        anchor = after - len(run) + 1
        instrs = rest[:anchor] + moved + rest[anchor:]
        moves += 1
    if moves:
        logger.debug("Commuted %d gate runs past CNOTs", moves)
    return bucketize(instrs, bucketed.qubit_count, bucketed.classical_bit_count)
