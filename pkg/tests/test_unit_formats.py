"""
Unit tests for physical listings and depth reports
"""
import json
import sys
from pathlib import Path

import pytest

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from circuit_ir import (
    GateKind,
    Instruction,
    Mode,
    QasmSyntaxError,
    QubitRef,
    conditioned,
    gate,
    measure,
)
from decomposer import compile_circuit
from frontend import LogicalCircuit, gen_bv, gen_random
from parallelizer import optimize
from scheduler import bucketize
from workflow import DepthReport, emit_physical, emit_qasm, read_physical
from workflow.formats import format_instruction
from workflow.reports import (
    REPORT_FIELDS,
    read_reports_csv,
    reports_to_csv,
    reports_to_json,
    write_reports,
)


def _physical(circuit, mode=Mode.CONSERVATIVE):
    plan, _ = optimize(bucketize(circuit), mode)
    return compile_circuit(plan, mode=mode, name=circuit.name)


def _row(**overrides):
    values = dict(
        name="bv_3_111", qubits=4, cnot_count=3, depth_naive=23, depth_opt=18,
        weighted_naive=61, weighted_opt=46, relative_improvement=DepthReport.improvement(23, 18),
        seed=0, mode="conservative", epr_naive=3, epr_opt=3, groups=1,
    )
    values.update(overrides)
    return DepthReport(**values)


def test_instruction_lines():
    """Test the one-line instruction format"""
    e0, m0 = QubitRef.comm(0), QubitRef.memory(0, 0)
    assert format_instruction(Instruction(GateKind.EPR, (e0, QubitRef.comm(2)))) == "epr n0.e0 n2.e0"
    assert format_instruction(measure(e0, 7, basis=GateKind.MEASURE_X)) == "measx n0.e0 -> c7"
    assert format_instruction(conditioned(GateKind.Z, m0, [9, 4])) == "z n0.m0 ?parity(c4,c9)=1"
    assert format_instruction(gate(GateKind.RZ, m0, params=(0.25,))) == "rz(0.25) n0.m0"


def test_listing_header():
    """Test the header lines of a physical listing"""
    text = emit_physical(_physical(gen_bv(3, "111")))
    lines = text.splitlines()
    assert lines[0] == "circuit bv_3_111"
    assert lines[1] == "topology nodes=4 memory=4"
    assert lines[2] == "placement 0:n0.m0 1:n1.m0 2:n2.m0 3:n3.m0"
    assert lines[3].startswith("cbits ") and lines[3].endswith(" logical=3")
    assert text.endswith("\n")


@pytest.mark.parametrize(
    "circuit",
    [gen_bv(4, "1011"), gen_random(4, 40, seed=2, pattern="fanout_heavy"), LogicalCircuit.of(2, [], name="empty")],
    ids=["bv", "random", "empty"],
)
def test_listing_reads_back_identically(circuit):
    """Test that a parsed listing re-emits byte for byte"""
    physical = _physical(circuit, Mode.RELAXED)
    text = emit_physical(physical)
    parsed = read_physical(text)
    assert emit_physical(parsed) == text
    assert parsed.instructions == tuple(
        Instruction(ins.kind, ins.operands, ins.params, ins.writes, ins.condition) for ins in physical.instructions
    )
    assert parsed.placement == physical.placement
    assert parsed.logical_bit_count == physical.logical_bit_count


@pytest.mark.parametrize(
    "text",
    [
        "",
        "circuit x\ntopology nodes=1 memory=4\nplacement 0:n0.m0\ncbits 0 logical=0\nfoo n0.m0\n",
        "circuit x\ntopology nodes=1 memory=4\nplacement 0:n0.m0\ncbits 0 logical=0\nh q0\n",
        "circuit x\ntopology nodes=1 memory=4\nplacement 0:n0.x0\ncbits 0 logical=0\n",
    ],
)
def test_malformed_listing(text):
    """Test that bad listings are rejected"""
    with pytest.raises(QasmSyntaxError):
        read_physical(text)


def test_qasm_export_rejects_physical_only_gates():
    """Test resets cannot be written as logical QASM"""
    with pytest.raises(ValueError):
        emit_qasm(LogicalCircuit.of(1, [Instruction(GateKind.RESET, (0,))]))
    with pytest.raises(ValueError):
        emit_qasm(LogicalCircuit.of(2, [measure(0, 0), conditioned(GateKind.X, 1, [0])]))


def test_improvement():
    """Test relative improvement, including an empty baseline"""
    assert DepthReport.improvement(20, 15) == pytest.approx(0.25)
    assert DepthReport.improvement(0, 0) == 0.0


def test_json_and_csv_agree(tmp_path):
    """Test that both encodings carry the same rows"""
    rows = [_row(), _row(name="dj_3_balanced111", seed=None, groups=0)]
    records = json.loads(reports_to_json(rows))
    assert [list(r) for r in records] == [list(REPORT_FIELDS)] * 2
    csv_text = reports_to_csv(rows)
    assert csv_text.splitlines()[0] == ",".join(REPORT_FIELDS)
    assert read_reports_csv(csv_text) == rows
    assert [DepthReport.model_validate(r) for r in records] == rows

    path = write_reports(rows, tmp_path / "out" / "bench.csv", "csv")
    assert path.read_text() == csv_text
    with pytest.raises(ValueError):
        write_reports(rows, tmp_path / "bench.xml", "xml")
