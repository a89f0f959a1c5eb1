"""Command-line workflow: configuration, orchestration and report output."""

from .cli import cli
from .config import Settings, load_config, load_settings
from .formats import emit_physical, emit_qasm, read_physical
from .orchestrator import CompilationOrchestrator, CircuitRequest
from .reports import DepthReport

__all__ = [
    "CircuitRequest",
    "CompilationOrchestrator",
    "DepthReport",
    "Settings",
    "cli",
    "emit_physical",
    "emit_qasm",
    "load_config",
    "load_settings",
    "read_physical",
]
