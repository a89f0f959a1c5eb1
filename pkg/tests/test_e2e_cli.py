"""
End-to-end tests for CLI
"""
import dataclasses
import json
import sys
from pathlib import Path

import pytest
from click.testing import CliRunner

# Add src to path
sys.path.insert(0, str(Path(__file__).parent.parent / "src"))

from circuit_ir import GateKind
from frontend import gen_bv, parse_qasm
from workflow import cli, read_physical
from workflow import orchestrator as orchestrator_module
from workflow.reports import read_reports_csv


@pytest.fixture
def runner(monkeypatch, tmp_path):
    """CLI runner working inside a scratch directory"""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv("LOG_LEVEL", raising=False)
    monkeypatch.delenv("OUTPUT_DIR", raising=False)
    return CliRunner()


def invoke(runner, *args):
    return runner.invoke(cli, ["--log-level", "WARNING", *args], obj={})


def test_cli_module_import():
    """Test that CLI module can be imported"""
    from workflow import cli as imported
    assert imported is not None


def test_compile_generated_bv(runner, tmp_path):
    """Test compiling a generated circuit writes a listing and a report"""
    result = invoke(runner, "compile", "--gen", "bv", "-n", "3", "--out", "bv.phys", "--report", "bv.json")
    assert result.exit_code == 0, result.output

    physical = read_physical((tmp_path / "bv.phys").read_text())
    assert physical.name == "bv_3_111"
    assert physical.epr_count == 3

    (row,) = json.loads((tmp_path / "bv.json").read_text())
    assert row["mode"] == "conservative"
    assert row["depth_opt"] < row["depth_naive"]
    assert row["groups"] == 1
    assert row["relative_improvement"] > 0


def test_compile_default_output_path(runner, tmp_path):
    """Test the listing lands in the configured output directory"""
    result = invoke(runner, "compile", "--gen", "dj", "-n", "3")
    assert result.exit_code == 0, result.output
    assert (tmp_path / "output" / "dj_3_balanced111.phys").exists()


def test_compile_naive_mode_matches_baseline(runner, tmp_path):
    """Test that naive mode reports equal depths"""
    result = invoke(runner, "compile", "--gen", "bv", "-n", "4", "--mode", "naive", "--report", "r.csv", "--format", "csv")
    assert result.exit_code == 0, result.output
    (row,) = read_reports_csv((tmp_path / "r.csv").read_text())
    assert row.depth_opt == row.depth_naive
    assert row.relative_improvement == 0.0


def test_compile_qasm_file(runner, tmp_path):
    """Test compiling a QASM file by path"""
    (tmp_path / "fan.qasm").write_text(
        'OPENQASM 2.0;\ninclude "qelib1.inc";\nqreg q[4];\nh q[0];\ncx q[0],q[1];\ncx q[0],q[2];\ncx q[0],q[3];\n'
    )
    result = invoke(runner, "compile", "fan.qasm", "--out", "fan.phys")
    assert result.exit_code == 0, result.output
    assert read_physical((tmp_path / "fan.phys").read_text()).name == "fan"


def test_malformed_qasm_exits_1(runner, tmp_path):
    """Test that a syntax error reports its line and exits 1"""
    (tmp_path / "bad.qasm").write_text("qreg q[2];\ncx q[0] q[1];\n")
    result = invoke(runner, "compile", "bad.qasm")
    assert result.exit_code == 1
    assert "line 2" in result.output


def test_unsupported_gate_exits_1(runner, tmp_path):
    """Test that gates outside the subset exit 1"""
    (tmp_path / "ccx.qasm").write_text("qreg q[3];\nccx q[0],q[1],q[2];\n")
    result = invoke(runner, "compile", "ccx.qasm")
    assert result.exit_code == 1
    assert "ccx" in result.output


@pytest.mark.parametrize(
    "args",
    [
        ["compile"],
        ["compile", "--gen", "bv"],
        ["compile", "--gen", "bv", "-n", "3", "--secret", "12"],
        ["compile", "missing.qasm"],
    ],
)
def test_input_errors_exit_1(runner, args):
    """Test missing or invalid inputs"""
    assert invoke(runner, *args).exit_code == 1


def test_bad_config_exits_1(runner, tmp_path):
    """Test that config errors name the offending key"""
    (tmp_path / "bad.yaml").write_text("cost_model:\n  naive_cnot_cost: 0\n")
    result = runner.invoke(cli, ["--config", "bad.yaml", "compile", "--gen", "bv", "-n", "3"], obj={})
    assert result.exit_code == 1
    assert "cost_model.naive_cnot_cost" in result.output


def test_cost_model_file(runner, tmp_path):
    """Test that a cost-model file changes the weighted depths"""
    (tmp_path / "cost.yaml").write_text("naive_cnot_cost: 30\n")
    base = invoke(runner, "compile", "--gen", "bv", "-n", "3", "--report", "base.json")
    heavy = invoke(runner, "compile", "--gen", "bv", "-n", "3", "--cost-model", "cost.yaml", "--report", "heavy.json")
    assert base.exit_code == 0, base.output
    assert heavy.exit_code == 0, heavy.output
    (base_row,) = json.loads((tmp_path / "base.json").read_text())
    (heavy_row,) = json.loads((tmp_path / "heavy.json").read_text())
    assert heavy_row["weighted_naive"] == base_row["weighted_naive"] + 3 * (30 - 19)
    assert heavy_row["depth_naive"] == base_row["depth_naive"]


def test_verify_equivalent(runner):
    """Test verify on a compiled fan-in circuit"""
    result = invoke(runner, "verify", "--gen", "bv", "-n", "3", "-k", "2")
    assert result.exit_code == 0, result.output
    assert "Equivalent: yes" in result.output


def test_verify_detects_broken_compiler(runner, tmp_path, monkeypatch):
    """Test that a compiler dropping corrections exits 3"""
    real = orchestrator_module.compile_circuit

    def dropping_corrections(*args, **kwargs):
        physical = real(*args, **kwargs)
        kept = tuple(ins for ins in physical.instructions if not (ins.kind is GateKind.Z and ins.condition is not None))
        return dataclasses.replace(physical, instructions=kept)

    monkeypatch.setattr(orchestrator_module, "compile_circuit", dropping_corrections)
    (tmp_path / "bell.qasm").write_text("qreg q[2];\nh q[0];\ncx q[0],q[1];\n")
    result = invoke(runner, "verify", "bell.qasm", "--mode", "naive", "-k", "2")
    assert result.exit_code == 3
    assert "Equivalent: NO" in result.output


def test_bench_writes_csv(runner, tmp_path):
    """Test a small benchmark run over two modes"""
    result = invoke(
        runner, "bench", "--suite", "bv", "--qubits", "3..4",
        "--mode", "naive", "--mode", "conservative", "--out", "bench.csv",
    )
    assert result.exit_code == 0, result.output
    rows = read_reports_csv((tmp_path / "bench.csv").read_text())
    assert [(r.name, r.mode) for r in rows] == [
        ("bv_3_111", "naive"), ("bv_3_111", "conservative"),
        ("bv_4_1111", "naive"), ("bv_4_1111", "conservative"),
    ]
    for row in rows:
        assert row.depth_opt <= row.depth_naive
    assert "Benchmark Summary" in result.output


def test_bench_random_suite_json(runner, tmp_path):
    """Test the seeded random suite"""
    args = ["bench", "--suite", "random", "--qubits", "3..5", "--count", "3", "--gates", "10..30", "--seed", "4",
            "--format", "json"]
    result = invoke(runner, *args, "--out", "a.json")
    assert result.exit_code == 0, result.output
    again = invoke(runner, *args, "--out", "b.json")
    assert again.exit_code == 0, again.output
    rows = json.loads((tmp_path / "a.json").read_text())
    assert len(rows) == 3
    assert [r["seed"] for r in rows] == [4, 5, 6]
    assert (tmp_path / "a.json").read_text() == (tmp_path / "b.json").read_text()


def test_bench_rejects_bad_range(runner):
    """Test range validation"""
    assert invoke(runner, "bench", "--suite", "bv", "--qubits", "5..2").exit_code == 1


def test_gen_prints_qasm(runner):
    """Test that gen writes parseable QASM to stdout"""
    result = invoke(runner, "gen", "--gen", "bv", "-n", "3", "--secret", "101")
    assert result.exit_code == 0, result.output
    assert result.output.startswith("OPENQASM 2.0;")
    assert parse_qasm(result.output).instructions == gen_bv(3, "101").instructions


def test_gen_to_file(runner, tmp_path):
    """Test gen with an output file"""
    result = invoke(runner, "gen", "--gen", "random", "-n", "4", "--gates", "25", "--seed", "3", "--out", "r.qasm")
    assert result.exit_code == 0, result.output
    assert len(parse_qasm((tmp_path / "r.qasm").read_text())) == 25
