"""Logical circuit import and benchmark generation."""

from .circuit import LogicalCircuit
from .generators import ORACLES, PATTERNS, gen_bv, gen_dj, gen_random, parse_oracle
from .qasm import parse_qasm, parse_qasm_file, tokenize

__all__ = [
    "LogicalCircuit",
    "ORACLES",
    "PATTERNS",
    "gen_bv",
    "gen_dj",
    "gen_random",
    "parse_oracle",
    "parse_qasm",
    "parse_qasm_file",
    "tokenize",
]
