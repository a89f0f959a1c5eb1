"""Circuit intermediate representation shared by every compiler pass."""

from .buckets import Bucket, BucketedCircuit, GroupKind, MergeGroup, Mode, flatten
from .cost import CostModel
from .depth import (
    dependency_edges,
    dependency_graph,
    depth_layers,
    group_cost,
    is_distributed,
    layer_levels,
    partition_group,
    placement_nodes,
    weighted_depth,
)
from .errors import (
    AnnotationMissingError,
    AtomicityViolationError,
    CompilerError,
    ConfigError,
    GeneratorError,
    InvariantViolation,
    LocalGateError,
    MalformedBucketError,
    NodeCollisionError,
    PlacementError,
    QasmSyntaxError,
    RegisterOverflowError,
    ResourceError,
    SimulationError,
    UnsupportedGateError,
)
from .instructions import (
    CONTROL_COMMUTING,
    LOGICAL_GATES,
    SINGLE_QUBIT_UNITARIES,
    TARGET_COMMUTING,
    Condition,
    GateKind,
    Instruction,
    Qubit,
    cnot,
    conditioned,
    gate,
    measure,
    qubits_of,
)
from .topology import NodeTopology, Placement, QubitRef, Role
from .validation import Violation, validate, validate_instructions

__all__ = [
    "AnnotationMissingError", "AtomicityViolationError", "Bucket", "BucketedCircuit",
    "CONTROL_COMMUTING", "CompilerError", "Condition", "ConfigError", "CostModel",
    "GateKind", "GeneratorError", "GroupKind", "Instruction", "InvariantViolation",
    "LOGICAL_GATES", "LocalGateError", "MalformedBucketError", "MergeGroup", "Mode",
    "NodeCollisionError", "NodeTopology", "Placement", "PlacementError",
    "QasmSyntaxError", "Qubit", "QubitRef", "RegisterOverflowError", "ResourceError",
    "Role", "SINGLE_QUBIT_UNITARIES", "SimulationError", "TARGET_COMMUTING",
    "UnsupportedGateError", "Violation", "cnot", "conditioned", "dependency_edges",
    "dependency_graph", "depth_layers", "flatten", "gate", "group_cost",
    "is_distributed", "layer_levels", "measure", "partition_group", "placement_nodes",
    "qubits_of", "validate", "validate_instructions", "weighted_depth",
]
