"""Configuration loading: YAML files validated by pydantic, with .env overrides."""

import logging
import os
from pathlib import Path
from typing import Any, Literal, Optional, Union

import yaml
from dotenv import load_dotenv
from pydantic import BaseModel, ConfigDict, Field, ValidationError
from rich.logging import RichHandler

from circuit_ir import ConfigError, CostModel, Mode, NodeTopology, Placement

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent.parent / "config" / "config.yaml"
LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class _Section(BaseModel):
    model_config = ConfigDict(extra="forbid")


class TopologySettings(_Section):
    node_count: Optional[int] = Field(default=None, ge=1)
    memory_per_node: int = Field(default=4, ge=1)
    placement: Literal["one_per_node", "packed"] = "one_per_node"
    qubits_per_node: int = Field(default=1, ge=1)

    def resolve(self, qubit_count: int) -> tuple[NodeTopology, Placement]:
        """Topology and placement for a circuit of ``qubit_count`` logical qubits.

        Raises:
            ConfigError: The configured nodes cannot host the circuit.
        """
        if self.placement == "packed":
            if self.qubits_per_node > self.memory_per_node:
                raise ConfigError(
                    f"topology.qubits_per_node: {self.qubits_per_node} exceeds memory_per_node {self.memory_per_node}"
                )
            placement = Placement.packed(qubit_count, self.qubits_per_node)
        else:
            placement = Placement.one_per_node(qubit_count)
        nodes = self.node_count if self.node_count is not None else max(1, placement.node_span)
        if nodes < placement.node_span:
            raise ConfigError(f"topology.node_count: {nodes} nodes cannot host {qubit_count} logical qubits")
        return NodeTopology(nodes, self.memory_per_node), placement


class CostModelSettings(_Section):
    naive_cnot_cost: int = Field(default=19, ge=1)
    parallel_base_cost: int = Field(default=42, ge=1)
    parallel_increment: int = Field(default=1, ge=1)
    parallel_base_size: int = Field(default=2, ge=1)
    min_group_size_conservative: int = Field(default=3, ge=2)

    def build(self) -> CostModel:
        return CostModel(**self.model_dump())


class CompilerSettings(_Section):
    mode: Mode = Mode.CONSERVATIVE
    seed: int = Field(default=0, ge=0)
    random_states: int = Field(default=20, ge=0)


class WorkflowSettings(_Section):
    output_directory: str = "output"
    max_workers: int = Field(default=1, ge=1)


class LoggingSettings(_Section):
    level: Literal["DEBUG", "INFO", "WARNING", "ERROR"] = "INFO"
    file: Optional[str] = None
    console: bool = True


class Settings(_Section):
    topology: TopologySettings = Field(default_factory=TopologySettings)
    cost_model: CostModelSettings = Field(default_factory=CostModelSettings)
    compiler: CompilerSettings = Field(default_factory=CompilerSettings)
    workflow: WorkflowSettings = Field(default_factory=WorkflowSettings)
    logging: LoggingSettings = Field(default_factory=LoggingSettings)


def _key_path(error: dict[str, Any], prefix: str) -> str:
    parts = [prefix] if prefix else []
    parts += [str(p) for p in error["loc"]]
    return ".".join(parts) or "<root>"


def _validate(model: type[_Section], data: Any, prefix: str = "") -> Any:
    try:
        return model.model_validate(data)
    except ValidationError as exc:
        first = exc.errors()[0]
        raise ConfigError(f"{_key_path(first, prefix)}: {first['msg']}") from exc


def _read_yaml(path: Union[str, Path]) -> dict[str, Any]:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config file {path}: {exc}") from exc
    try:
        data = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: invalid YAML: {exc}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: top level must be a mapping")
    return data


def _apply_env(settings: Settings) -> Settings:
    load_dotenv()
    level = os.getenv("LOG_LEVEL")
    if level:
        settings.logging = _validate(LoggingSettings, {**settings.logging.model_dump(), "level": level.upper()}, "logging")
    output = os.getenv("OUTPUT_DIR")
    if output:
        settings.workflow = settings.workflow.model_copy(update={"output_directory": output})
    return settings


def load_settings(
    path: Optional[Union[str, Path]] = None,
    topology_path: Optional[Union[str, Path]] = None,
    cost_model_path: Optional[Union[str, Path]] = None,
    use_env: bool = True,
) -> Settings:
    """Load the full settings tree.

    Args:
        path: Main config file; None reads nothing and uses defaults.
        topology_path: File holding only the ``topology`` section keys.
        cost_model_path: File holding only the ``cost_model`` section keys.
        use_env: Apply ``.env``/environment overrides.

    Raises:
        ConfigError: Unreadable file, invalid YAML, unknown key or a value
            out of range. The message names the dotted key path.
    """
    data = _read_yaml(path) if path is not None else {}
    settings: Settings = _validate(Settings, data)
    if topology_path is not None:
        settings.topology = _validate(TopologySettings, _read_yaml(topology_path), "topology")
    if cost_model_path is not None:
        settings.cost_model = _validate(CostModelSettings, _read_yaml(cost_model_path), "cost_model")
    return _apply_env(settings) if use_env else settings


def load_config(path: Union[str, Path]) -> tuple[TopologySettings, CostModel, CompilerSettings]:
    """Topology settings, cost model and compiler defaults from one file."""
    settings = load_settings(path, use_env=False)
    return settings.topology, settings.cost_model.build(), settings.compiler


def configure_logging(settings: LoggingSettings) -> None:
    """Install the console and file handlers described by the ``logging`` section."""
    root = logging.getLogger()
    root.setLevel(getattr(logging, settings.level))
    for handler in list(root.handlers):
        if getattr(handler, "_compiler_handler", False):
            root.removeHandler(handler)
            handler.close()
    handlers: list[logging.Handler] = []
    if settings.console:
        handlers.append(RichHandler(show_path=False, rich_tracebacks=False))
    if settings.file:
        log_path = Path(settings.file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path)
        file_handler.setFormatter(logging.Formatter(LOG_FORMAT))
        handlers.append(file_handler)
    for handler in handlers:
        handler._compiler_handler = True  # type: ignore[attr-defined]
        root.addHandler(handler)
