"""OpenQASM 2.0 importer for the logical gate subset."""

import logging
import math
import re
from pathlib import Path
from typing import Iterator, NamedTuple, Optional, Union

from circuit_ir import (
    GateKind,
    Instruction,
    InvariantViolation,
    QasmSyntaxError,
    RegisterOverflowError,
    UnsupportedGateError,
    cnot,
)

from .circuit import LogicalCircuit

logger = logging.getLogger(__name__)

_TOKEN = re.compile(
    r"(?P<space>\s+)"
    r"|(?P<comment>//[^\n]*)"
    r"|(?P<arrow>->)"
    r"|(?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][-+]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<string>\"[^\"\n]*\")"
    r"|(?P<symbol>[;,\[\]\(\)\{\}+\-*/^=<>])"
)

_GATES: dict[str, GateKind] = {
    "h": GateKind.H, "x": GateKind.X, "y": GateKind.Y, "z": GateKind.Z,
    "s": GateKind.S, "sdg": GateKind.SDG, "t": GateKind.T, "tdg": GateKind.TDG,
    "rz": GateKind.RZ, "rx": GateKind.RX, "ry": GateKind.RY,
    "cx": GateKind.CNOT, "cz": GateKind.CZ, "swap": GateKind.SWAP,
}


class Token(NamedTuple):
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str) -> Iterator[Token]:
    """Split QASM text into tokens with 1-based line and column."""
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise QasmSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = match.lastgroup
        chunk = match.group()
        if kind not in ("space", "comment"):
            yield Token(kind, chunk, line, pos - line_start + 1)
        newlines = chunk.count("\n")
        if newlines:
            line += newlines
            line_start = match.start() + chunk.rindex("\n") + 1
        pos = match.end()


class _Tokens:
    """Token cursor with one-token lookahead."""

    def __init__(self, text: str):
        self._tokens = list(tokenize(text))
        self._pos = 0
        last = self._tokens[-1] if self._tokens else Token("eof", "", 1, 1)
        self._eof = Token("eof", "", last.line, last.column + len(last.text))

    def peek(self) -> Token:
        return self._tokens[self._pos] if self._pos < len(self._tokens) else self._eof

    def next(self) -> Token:
        tok = self.peek()
        self._pos += 1
        return tok

    def accept(self, text: str) -> Optional[Token]:
        if self.peek().text == text and self.peek().kind != "string":
            return self.next()
        return None

    def expect(self, text: str, what: str = "") -> Token:
        tok = self.next()
        if tok.text != text or tok.kind == "string":
            found = tok.text or "end of input"
            raise QasmSyntaxError(f"expected {what or repr(text)}, found {found!r}", tok.line, tok.column)
        return tok

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.next()
        if tok.kind != kind:
            found = tok.text or "end of input"
            raise QasmSyntaxError(f"expected {what}, found {found!r}", tok.line, tok.column)
        return tok


class _Register(NamedTuple):
    offset: int
    size: int


class _Parser:
    def __init__(self, text: str):
        self.tokens = _Tokens(text)
        self.qregs: dict[str, _Register] = {}
        self.cregs: dict[str, _Register] = {}
        self.qubit_count = 0
        self.bit_count = 0
        self.instructions: list[Instruction] = []

    def parse(self, name: str) -> LogicalCircuit:
        self._header()
        while self.tokens.peek().kind != "eof":
            self._statement()
        return LogicalCircuit(self.qubit_count, tuple(self.instructions), name, self.bit_count)

    def _header(self) -> None:
        if self.tokens.peek().text != "OPENQASM":
            logger.debug("QASM input has no OPENQASM header")
            return
        self.tokens.next()
        version = self.tokens.expect_kind("number", "version number")
        if version.text not in ("2", "2.0"):
            raise QasmSyntaxError(f"only OPENQASM 2.0 is supported, got {version.text}", version.line, version.column)
        self.tokens.expect(";")

    def _statement(self) -> None:
        tok = self.tokens.next()
        if tok.kind != "name":
            raise QasmSyntaxError(f"expected a statement, found {tok.text!r}", tok.line, tok.column)
        word = tok.text
        if word == "include":
            path = self.tokens.expect_kind("string", "include path")
            if path.text.strip('"') != "qelib1.inc":
                raise QasmSyntaxError(f"cannot include {path.text}", path.line, path.column)
            self.tokens.expect(";")
        elif word in ("qreg", "creg"):
            self._declaration(word)
        elif word == "measure":
            self._measure(tok)
        elif word == "barrier":
            qubits: list[int] = []
            for arg in self._arguments(self.qregs):
                qubits.extend(q for q in arg if q not in qubits)
            self.tokens.expect(";")
            self.instructions.append(Instruction(GateKind.BARRIER, tuple(qubits)))
        elif word in _GATES:
            self._gate(tok, _GATES[word])
        else:
            raise UnsupportedGateError(word, tok.line)

    def _declaration(self, word: str) -> None:
        name = self.tokens.expect_kind("name", "register name")
        if name.text in self.qregs or name.text in self.cregs:
            raise QasmSyntaxError(f"register '{name.text}' already declared", name.line, name.column)
        self.tokens.expect("[")
        size_tok = self.tokens.expect_kind("number", "register size")
        size = self._uint(size_tok)
        if size < 1:
            raise QasmSyntaxError("register size must be positive", size_tok.line, size_tok.column)
        self.tokens.expect("]")
        self.tokens.expect(";")
        if word == "qreg":
            self.qregs[name.text] = _Register(self.qubit_count, size)
            self.qubit_count += size
        else:
            self.cregs[name.text] = _Register(self.bit_count, size)
            self.bit_count += size

    def _measure(self, tok: Token) -> None:
        (qubits,) = self._arguments(self.qregs, limit=1)
        self.tokens.expect("->")
        (bits,) = self._arguments(self.cregs, limit=1)
        self.tokens.expect(";")
        if len(qubits) != len(bits):
            raise QasmSyntaxError("measure operands have different sizes", tok.line, tok.column)
        for q, b in zip(qubits, bits):
            self.instructions.append(Instruction(GateKind.MEASURE_Z, (q,), writes=b))

    def _gate(self, tok: Token, kind: GateKind) -> None:
        params: list[float] = []
        if self.tokens.accept("("):
            params.append(self._expr())
            while self.tokens.accept(","):
                params.append(self._expr())
            self.tokens.expect(")")
        if len(params) != kind.param_count:
            raise QasmSyntaxError(
                f"gate '{tok.text}' takes {kind.param_count} parameters, got {len(params)}", tok.line, tok.column
            )
        args = self._arguments(self.qregs)
        self.tokens.expect(";")
        if len(args) != kind.arity:
            raise QasmSyntaxError(
                f"gate '{tok.text}' takes {kind.arity} operands, got {len(args)}", tok.line, tok.column
            )
        sizes = {len(a) for a in args if len(a) > 1}
        if len(sizes) > 1:
            raise QasmSyntaxError(f"registers of different sizes in '{tok.text}'", tok.line, tok.column)
        width = sizes.pop() if sizes else 1
        for i in range(width):
            operands = tuple(a[i] if len(a) > 1 else a[0] for a in args)
            if len(set(operands)) != len(operands):
                raise QasmSyntaxError(f"gate '{tok.text}' repeats an operand", tok.line, tok.column)
            if kind is GateKind.SWAP:
                a, b = operands
                self.instructions.extend([cnot(a, b), cnot(b, a), cnot(a, b)])
            else:
                self.instructions.append(Instruction(kind, operands, tuple(params)))

    def _arguments(self, registers: dict[str, _Register], limit: Optional[int] = None) -> list[list[int]]:
        args = [self._argument(registers)]
        while (limit is None or len(args) < limit) and self.tokens.accept(","):
            args.append(self._argument(registers))
        return args

    def _argument(self, registers: dict[str, _Register]) -> list[int]:
        name = self.tokens.expect_kind("name", "register")
        if name.text not in registers:
            raise QasmSyntaxError(f"undeclared register '{name.text}'", name.line, name.column)
        reg = registers[name.text]
        if not self.tokens.accept("["):
            return list(range(reg.offset, reg.offset + reg.size))
        index_tok = self.tokens.expect_kind("number", "register index")
        index = self._uint(index_tok)
        self.tokens.expect("]")
        if index >= reg.size:
            raise RegisterOverflowError(
                f"line {index_tok.line}, column {index_tok.column}: "
                f"index {index} out of range for register {name.text}[{reg.size}]"
            )
        return [reg.offset + index]

    @staticmethod
    def _uint(tok: Token) -> int:
        if not tok.text.isdigit():
            raise QasmSyntaxError(f"expected an unsigned integer, found {tok.text!r}", tok.line, tok.column)
        return int(tok.text)

    # Parameter expressions: sums of products of signed atoms.

    def _expr(self) -> float:
        value = self._term()
        while True:
            if self.tokens.accept("+"):
                value += self._term()
            elif self.tokens.accept("-"):
                value -= self._term()
            else:
                return value

    def _term(self) -> float:
        value = self._unary()
        while True:
            if self.tokens.accept("*"):
                value *= self._unary()
            elif self.tokens.peek().text == "/":
                tok = self.tokens.next()
                divisor = self._unary()
                if divisor == 0:
                    raise QasmSyntaxError("division by zero", tok.line, tok.column)
                value /= divisor
            else:
                return value

    def _unary(self) -> float:
        if self.tokens.accept("-"):
            return -self._unary()
        if self.tokens.accept("+"):
            return self._unary()
        tok = self.tokens.next()
        if tok.kind == "number":
            return float(tok.text)
        if tok.kind == "name" and tok.text == "pi":
            return math.pi
        if tok.text == "(":
            value = self._expr()
            self.tokens.expect(")")
            return value
        raise QasmSyntaxError(f"expected a number, found {tok.text or 'end of input'!r}", tok.line, tok.column)


def parse_qasm(text: str, name: str = "qasm") -> LogicalCircuit:
    """Parse OpenQASM 2.0 text into a logical circuit.

    Registers are flattened into one index space in declaration order.
    ``swap`` expands to three CNOTs.

    Raises:
        QasmSyntaxError: malformed input, with line and column.
        UnsupportedGateError: a gate or statement outside the subset.
        RegisterOverflowError: an index beyond its register.
    """
    circuit = _Parser(text).parse(name)
    problems = circuit.violations()
    if problems:
        raise InvariantViolation("parsed circuit is valid", "; ".join(str(v) for v in problems))
    logger.debug("Parsed %s: %d qubits, %d instructions", name, circuit.qubit_count, len(circuit))
    return circuit


def parse_qasm_file(path: Union[str, Path]) -> LogicalCircuit:
    path = Path(path)
    return parse_qasm(path.read_text(encoding="utf-8"), name=path.stem)
