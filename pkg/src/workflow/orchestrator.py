"""Pipeline orchestration: load or generate, compile, verify and benchmark."""

import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, Iterator, List, Literal, Optional, Sequence

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from circuit_ir import (
    CompilerError,
    ConfigError,
    GeneratorError,
    Mode,
    QasmSyntaxError,
    RegisterOverflowError,
    SimulationError,
    UnsupportedGateError,
    weighted_depth,
)
from decomposer import compile_circuit, parallel_threshold
from frontend import PATTERNS, LogicalCircuit, gen_bv, gen_dj, gen_random, parse_qasm_file
from parallelizer import naive_plan, optimize
from scheduler import bucketize
from simulator import check_equivalence

from .config import Settings
from .reports import DepthReport

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_INVARIANT = 2
EXIT_NOT_EQUIVALENT = 3

_INPUT_ERRORS = (
    QasmSyntaxError,
    UnsupportedGateError,
    RegisterOverflowError,
    ConfigError,
    GeneratorError,
    SimulationError,
    OSError,
)


def exit_code_for(exc: BaseException) -> int:
    """CLI exit code for a pipeline exception."""
    return EXIT_INPUT if isinstance(exc, _INPUT_ERRORS) else EXIT_INVARIANT


def _failure(exc: BaseException, **extra: Any) -> Dict[str, Any]:
    return {
        "success": False,
        "error": str(exc),
        "error_type": type(exc).__name__,
        "exit_code": exit_code_for(exc),
        **extra,
    }


class CircuitRequest(BaseModel):
    """A benchmark circuit to generate."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    gen: Literal["bv", "dj", "random"]
    qubits: int = Field(ge=1)
    secret: Optional[str] = None
    oracle: str = "balanced"
    pattern: str = "uniform"
    gates: int = Field(default=30, ge=1)
    seed: int = Field(default=0, ge=0)

    def build(self) -> LogicalCircuit:
        if self.gen == "bv":
            return gen_bv(self.qubits, self.secret if self.secret is not None else "1" * self.qubits)
        if self.gen == "dj":
            return gen_dj(self.qubits, self.oracle)
        return gen_random(self.qubits, self.gates, self.seed, self.pattern)


def parse_range(text: str) -> range:
    """``"4..12"`` or ``"7"`` as an inclusive range.

    Raises:
        GeneratorError: Malformed or empty range.
    """
    try:
        if ".." in text:
            low, high = (int(part) for part in text.split("..", 1))
        else:
            low = high = int(text)
    except ValueError:
        raise GeneratorError(f"bad range '{text}', expected N or A..B") from None
    if low < 1 or high < low:
        raise GeneratorError(f"bad range '{text}'")
    return range(low, high + 1)


def suite_requests(
    suite: str,
    qubits: range,
    count: int,
    seed: int,
    gates: range = range(10, 201),
) -> Iterator[CircuitRequest]:
    """Benchmark circuits in deterministic (suite, qubits, seed) order.

    ``bv`` and ``dj`` yield one all-ones circuit per qubit count. ``random``
    yields ``count`` circuits cycling through the patterns, with qubit and
    gate counts drawn from a generator seeded by ``seed``.
    """
    suites = ("bv", "dj", "random") if suite == "all" else (suite,)
    for name in suites:
        if name == "bv":
            for n in qubits:
                yield CircuitRequest(gen="bv", qubits=n, seed=seed)
        elif name == "dj":
            for n in qubits:
                yield CircuitRequest(gen="dj", qubits=n, oracle="balanced", seed=seed)
        elif name == "random":
            rng = np.random.default_rng(seed)
            for index in range(count):
                n = int(rng.integers(max(2, qubits.start), max(2, qubits.stop - 1) + 1))
                size = int(rng.integers(gates.start, gates.stop))
                yield CircuitRequest(
                    gen="random",
                    qubits=n,
                    gates=size,
                    pattern=PATTERNS[index % len(PATTERNS)],
                    seed=seed + index,
                )
        else:
            raise GeneratorError(f"unknown suite '{name}'")


class CompilationOrchestrator:
    """Runs the compiler pipeline under one set of settings."""

    def __init__(self, settings: Optional[Settings] = None):
        """Initialize the orchestrator.

        Args:
            settings: Loaded settings; defaults when None.
        """
        self.settings = settings or Settings()
        self.cost = self.settings.cost_model.build()
        self.output_dir = Path(self.settings.workflow.output_directory)

    def load(self, path: Optional[str] = None, request: Optional[CircuitRequest] = None) -> LogicalCircuit:
        """Read a QASM file or generate a benchmark circuit."""
        if (path is None) == (request is None):
            raise GeneratorError("give exactly one of an input file or a generator")
        if path is not None:
            return parse_qasm_file(path)
        return request.build()

    def compile(self, circuit: LogicalCircuit, mode: Optional[Mode] = None) -> Dict[str, Any]:
        """Compile ``circuit`` in ``mode`` and against the naive baseline.

        Returns:
            Dict with ``success``, ``physical``, ``naive``, ``groups`` and a
            ``report`` row, or ``success: False`` with ``error`` and
            ``exit_code``.
        """
        mode = mode or self.settings.compiler.mode
        try:
            topology, placement = self.settings.topology.resolve(circuit.qubit_count)
            bucketed = bucketize(circuit)
            baseline = naive_plan(bucketed)
            naive = compile_circuit(
                baseline, placement=placement, topology=topology, mode=Mode.NAIVE, cost=self.cost, name=circuit.name
            )
            plan, groups = optimize(bucketed, mode, self.cost, placement, topology)
            physical = compile_circuit(
                plan, placement=placement, topology=topology, mode=mode, cost=self.cost, name=circuit.name
            )
            min_parallel = parallel_threshold(mode, self.cost) or sys.maxsize
            report = DepthReport(
                name=circuit.name,
                qubits=circuit.qubit_count,
                cnot_count=circuit.cnot_count,
                depth_naive=naive.depth(),
                depth_opt=physical.depth(),
                weighted_naive=weighted_depth(baseline, self.cost, placement, sys.maxsize),
                weighted_opt=weighted_depth(plan, self.cost, placement, min_parallel),
                relative_improvement=DepthReport.improvement(naive.depth(), physical.depth()),
                seed=self.settings.compiler.seed,
                mode=mode.value,
                epr_naive=naive.epr_count,
                epr_opt=physical.epr_count,
                groups=physical.parallel_block_count,
            )
        except (CompilerError, ValueError, OSError) as exc:
            logger.error("Compilation of '%s' failed: %s", circuit.name, exc)
            return _failure(exc, circuit=circuit.name)

        logger.info(
            "Compiled %s [%s]: depth %d -> %d, weighted %d -> %d, %d parallel blocks",
            circuit.name, mode.value, report.depth_naive, report.depth_opt,
            report.weighted_naive, report.weighted_opt, report.groups,
        )
        return {
            "success": True,
            "circuit": circuit,
            "physical": physical,
            "naive": naive,
            "groups": groups,
            "report": report,
        }

    def verify(self, circuit: LogicalCircuit, mode: Optional[Mode] = None) -> Dict[str, Any]:
        """Compile ``circuit`` and check the result against the logical circuit."""
        result = self.compile(circuit, mode)
        if not result["success"]:
            return result
        compiler = self.settings.compiler
        try:
            equivalence = check_equivalence(
                circuit,
                result["physical"],
                result["physical"].placement,
                random_states=compiler.random_states,
                seed=compiler.seed,
            )
        except CompilerError as exc:
            return _failure(exc, circuit=circuit.name)
        result["equivalence"] = equivalence
        if not equivalence.equivalent:
            result.update(success=False, exit_code=EXIT_NOT_EQUIVALENT, error="physical circuit is not equivalent")
        return result

    def run_benchmark(
        self,
        requests: Sequence[CircuitRequest],
        modes: Sequence[Mode],
        max_workers: Optional[int] = None,
    ) -> Dict[str, Any]:
        """Compile every request under every mode.

        Circuits are evaluated on a process pool when ``max_workers`` exceeds
        one; rows keep request order either way.

        Returns:
            Dict with ``rows`` (DepthReport list), ``failures`` and ``success``.
        """
        workers = max_workers or self.settings.workflow.max_workers
        jobs = [(request, list(modes), self.settings) for request in requests]
        if workers > 1 and len(jobs) > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                outcomes = list(pool.map(_bench_job, jobs))
        else:
            outcomes = [_bench_job(job) for job in jobs]

        rows: List[DepthReport] = []
        failures: List[Dict[str, Any]] = []
        for outcome in outcomes:
            for entry in outcome:
                if entry["success"]:
                    rows.append(entry["report"])
                else:
                    failures.append(entry)
        logger.info("Benchmark finished: %d rows, %d failures", len(rows), len(failures))
        return {
            "success": not failures,
            "total_circuits": len(jobs),
            "rows": rows,
            "failures": failures,
        }


def _bench_job(job: tuple[CircuitRequest, List[Mode], Settings]) -> List[Dict[str, Any]]:
    request, modes, settings = job
    orchestrator = CompilationOrchestrator(settings)
    try:
        circuit = request.build()
    except CompilerError as exc:
        return [_failure(exc, circuit=f"{request.gen}_{request.qubits}")]
    entries = []
    for mode in modes:
        result = orchestrator.compile(circuit, mode)
        if result["success"]:
            report = result["report"].model_copy(update={"seed": request.seed})
            entries.append({"success": True, "report": report})
        else:
            entries.append(result)
    return entries
