"""CLI interface for the compiler."""

from pathlib import Path
from typing import Any, Callable, Optional

import click
from rich.console import Console
from rich.markup import escape
from rich.panel import Panel
from rich.progress import Progress, SpinnerColumn, TextColumn
from rich.table import Table

from circuit_ir import CompilerError, GeneratorError, Mode

from .config import DEFAULT_CONFIG_PATH, CompilerSettings, Settings, configure_logging, load_settings
from .formats import emit_physical, emit_qasm
from .orchestrator import (
    EXIT_INPUT,
    EXIT_INVARIANT,
    EXIT_NOT_EQUIVALENT,
    EXIT_OK,
    CircuitRequest,
    CompilationOrchestrator,
    exit_code_for,
    parse_range,
    suite_requests,
)
from .reports import DepthReport, write_reports

console = Console()

MODES = [m.value for m in Mode]


def _fail(ctx: click.Context, message: str, code: int) -> None:
    console.print(f"[bold red]✗ Error:[/bold red] {escape(message)}")
    ctx.exit(code)


def _settings(ctx: click.Context, topology: Optional[str], cost_model: Optional[str], **overrides: Any) -> Settings:
    """Load settings for a command and configure logging, exiting 1 on config errors."""
    config_path = ctx.obj.get("config_path")
    try:
        settings = load_settings(config_path, topology, cost_model)
        compiler = {k: v for k, v in overrides.items() if v is not None}
        if compiler:
            settings.compiler = CompilerSettings.model_validate({**settings.compiler.model_dump(), **compiler})
    except (CompilerError, ValueError) as exc:
        _fail(ctx, str(exc), EXIT_INPUT)
    if ctx.obj.get("log_level"):
        settings.logging = settings.logging.model_copy(update={"level": ctx.obj["log_level"]})
    configure_logging(settings.logging)
    return settings


def _request(gen: Optional[str], qubits: Optional[int], secret, oracle, pattern, gates, seed) -> Optional[CircuitRequest]:
    if gen is None:
        return None
    if qubits is None:
        raise GeneratorError("--qubits is required with --gen")
    return CircuitRequest(
        gen=gen, qubits=qubits, secret=secret, oracle=oracle, pattern=pattern, gates=gates, seed=seed
    )


def _circuit_options(func: Callable) -> Callable:
    """Input selection, mode and config options shared by compile and verify."""
    options = [
        click.argument("input_file", required=False, type=click.Path(dir_okay=False)),
        click.option("--gen", type=click.Choice(["bv", "dj", "random"]), help="Generate the input circuit"),
        click.option("--qubits", "-n", type=int, help="Data qubits for the generator"),
        click.option("--secret", help="BV secret bit string (default all ones)"),
        click.option("--oracle", default="balanced", show_default=True, help="DJ oracle: constant0, constant1, balanced[:mask]"),
        click.option("--pattern", default="uniform", show_default=True, help="Random circuit pattern"),
        click.option("--gates", default=30, show_default=True, help="Random circuit gate count"),
        click.option("--mode", "-m", type=click.Choice(MODES), help="Optimization mode (config default: conservative)"),
        click.option("--topology", type=click.Path(dir_okay=False), help="YAML file with topology keys"),
        click.option("--cost-model", type=click.Path(dir_okay=False), help="YAML file with cost model keys"),
        click.option("--seed", type=int, help="Seed for random circuits and random test states"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _load(ctx: click.Context, orchestrator: CompilationOrchestrator, input_file, request):
    try:
        return orchestrator.load(input_file, request)
    except (CompilerError, OSError) as exc:
        _fail(ctx, str(exc), exit_code_for(exc))


def _report_table(report: DepthReport, title: str) -> Table:
    table = Table(title=title)
    table.add_column("Metric", style="cyan")
    table.add_column("Naive", style="yellow", justify="right")
    table.add_column("Optimized", style="green", justify="right")
    table.add_row("Structural depth", str(report.depth_naive), str(report.depth_opt))
    table.add_row("Weighted depth", str(report.weighted_naive), str(report.weighted_opt))
    table.add_row("EPR pairs", str(report.epr_naive), str(report.epr_opt))
    table.add_row("Relative improvement", "", f"{report.relative_improvement:.1%}")
    return table


@click.group()
@click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
              help="Configuration file (default: config/config.yaml)")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"]), default=None)
@click.pass_context
def cli(ctx: click.Context, config_path: Optional[str], log_level: Optional[str]):
    """Distributed CNOT-parallelizing quantum circuit compiler."""
    ctx.ensure_object(dict)
    if config_path is None and DEFAULT_CONFIG_PATH.exists():
        config_path = str(DEFAULT_CONFIG_PATH)
    ctx.obj["config_path"] = config_path
    ctx.obj["log_level"] = log_level


@cli.command()
@_circuit_options
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="Physical circuit output file")
@click.option("--report", type=click.Path(dir_okay=False), help="Report output file")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.pass_context
def compile(ctx, input_file, gen, qubits, secret, oracle, pattern, gates, mode, topology, cost_model, seed, out, report, fmt):
    """Compile a QASM file or generated circuit to a physical circuit."""
    settings = _settings(ctx, topology, cost_model, mode=mode, seed=seed)
    orchestrator = CompilationOrchestrator(settings)
    try:
        request = _request(gen, qubits, secret, oracle, pattern, gates, settings.compiler.seed)
    except (CompilerError, ValueError) as exc:
        _fail(ctx, str(exc), EXIT_INPUT)
    circuit = _load(ctx, orchestrator, input_file, request)

    result = orchestrator.compile(circuit, Mode(mode) if mode else None)
    if not result["success"]:
        _fail(ctx, result["error"], result["exit_code"])

    physical = result["physical"]
    out_path = Path(out) if out else orchestrator.output_dir / f"{circuit.name}.phys"
    try:
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(emit_physical(physical))
        if report:
            write_reports([result["report"]], report, fmt)
    except OSError as exc:
        _fail(ctx, str(exc), EXIT_INPUT)

    console.print(_report_table(result["report"], escape(f"{circuit.name} [{result['report'].mode}]")))
    console.print(f"[bold green]✓ Physical circuit written to[/bold green] {escape(str(out_path))}")
    ctx.exit(EXIT_OK)


@cli.command()
@_circuit_options
@click.option("--random-states", "-k", type=int, help="Random input states on top of the basis states")
@click.pass_context
def verify(ctx, input_file, gen, qubits, secret, oracle, pattern, gates, mode, topology, cost_model, seed, random_states):
    """Compile and check equivalence on every measurement branch."""
    settings = _settings(ctx, topology, cost_model, mode=mode, seed=seed, random_states=random_states)
    orchestrator = CompilationOrchestrator(settings)
    try:
        request = _request(gen, qubits, secret, oracle, pattern, gates, settings.compiler.seed)
    except (CompilerError, ValueError) as exc:
        _fail(ctx, str(exc), EXIT_INPUT)
    circuit = _load(ctx, orchestrator, input_file, request)

    with Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"), console=console) as progress:
        task = progress.add_task("Simulating branches...", total=None)
        result = orchestrator.verify(circuit, Mode(mode) if mode else None)
        progress.update(task, completed=True)

    equivalence = result.get("equivalence")
    if equivalence is None:
        _fail(ctx, result["error"], result["exit_code"])

    lines = [
        f"Equivalent: {'yes' if equivalence.equivalent else 'NO'}",
        f"Worst fidelity: {equivalence.worst_fidelity:.12f}",
        f"Branches: {equivalence.branch_count}",
        f"Inputs tested: {equivalence.inputs_tested}",
    ]
    if not equivalence.equivalent:
        lines.append(f"Failing input: {equivalence.failing_input}")
        lines.append(f"Failing branch: {dict(equivalence.failing_branch or ())}")
        lines += equivalence.diagnostics
    style = "green" if equivalence.equivalent else "red"
    console.print(Panel(escape("\n".join(lines)), title=f"[bold {style}]Equivalence: {escape(circuit.name)}[/bold {style}]"))
    ctx.exit(EXIT_OK if equivalence.equivalent else EXIT_NOT_EQUIVALENT)


@cli.command()
@click.option("--suite", type=click.Choice(["bv", "dj", "random", "all"]), default="all", show_default=True)
@click.option("--qubits", "-n", "qubit_range", default="4..12", show_default=True, help="Qubit range A..B")
@click.option("--count", default=10, show_default=True, help="Random circuits to generate")
@click.option("--gates", "gate_range", default="10..200", show_default=True, help="Random circuit size range A..B")
@click.option("--seed", type=int, help="Base seed")
@click.option("--mode", "-m", "modes", type=click.Choice(MODES), multiple=True, help="Modes to run (repeatable)")
@click.option("--topology", type=click.Path(dir_okay=False))
@click.option("--cost-model", type=click.Path(dir_okay=False))
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="Report file")
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="csv", show_default=True)
@click.option("--workers", type=int, help="Parallel worker processes")
@click.pass_context
def bench(ctx, suite, qubit_range, count, gate_range, seed, modes, topology, cost_model, out, fmt, workers):
    """Compile a benchmark suite and write one report row per circuit and mode."""
    settings = _settings(ctx, topology, cost_model, seed=seed)
    orchestrator = CompilationOrchestrator(settings)
    try:
        requests = list(suite_requests(
            suite, parse_range(qubit_range), count, settings.compiler.seed, parse_range(gate_range)
        ))
    except (CompilerError, ValueError) as exc:
        _fail(ctx, str(exc), EXIT_INPUT)
    chosen = [Mode(m) for m in modes] or [settings.compiler.mode]

    with Progress(SpinnerColumn(), TextColumn("[progress.description]{task.description}"), console=console) as progress:
        task = progress.add_task(f"Compiling {len(requests)} circuits...", total=None)
        result = orchestrator.run_benchmark(requests, chosen, workers)
        progress.update(task, completed=True)

    out_path = Path(out) if out else orchestrator.output_dir / f"bench_{suite}.{fmt}"
    try:
        write_reports(result["rows"], out_path, fmt)
    except OSError as exc:
        _fail(ctx, f"cannot write report: {exc}", EXIT_INPUT)

    table = Table(title="Benchmark Summary")
    table.add_column("Mode", style="cyan")
    table.add_column("Rows", justify="right")
    table.add_column("Improved", style="green", justify="right")
    table.add_column("Worse", style="red", justify="right")
    table.add_column("Best improvement", justify="right")
    for mode in chosen:
        rows = [r for r in result["rows"] if r.mode == mode.value]
        best = max((r.relative_improvement for r in rows), default=0.0)
        table.add_row(
            mode.value,
            str(len(rows)),
            str(sum(1 for r in rows if r.depth_opt < r.depth_naive)),
            str(sum(1 for r in rows if r.depth_opt > r.depth_naive)),
            f"{best:.1%}",
        )
    console.print(table)
    for failure in result["failures"]:
        console.print(f"[bold red]✗ {escape(str(failure.get('circuit')))}:[/bold red] {escape(failure['error'])}")
    console.print(f"Report written to {escape(str(out_path))}")
    ctx.exit(EXIT_OK if result["success"] else EXIT_INVARIANT)


@cli.command()
@click.option("--gen", type=click.Choice(["bv", "dj", "random"]), required=True)
@click.option("--qubits", "-n", type=int, required=True)
@click.option("--secret")
@click.option("--oracle", default="balanced", show_default=True)
@click.option("--pattern", default="uniform", show_default=True)
@click.option("--gates", default=30, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", "-o", type=click.Path(dir_okay=False), help="QASM output file (default: stdout)")
@click.pass_context
def gen(ctx, gen, qubits, secret, oracle, pattern, gates, seed, out):
    """Generate a benchmark circuit as OpenQASM 2.0."""
    try:
        circuit = _request(gen, qubits, secret, oracle, pattern, gates, seed).build()
    except (CompilerError, ValueError) as exc:
        _fail(ctx, str(exc), EXIT_INPUT)
    text = emit_qasm(circuit)
    if out is None:
        click.echo(text, nl=False)
    else:
        try:
            Path(out).write_text(text)
        except OSError as exc:
            _fail(ctx, str(exc), EXIT_INPUT)
        console.print(f"[bold green]✓ Wrote {escape(circuit.name)} to[/bold green] {escape(out)}")
    ctx.exit(EXIT_OK)

