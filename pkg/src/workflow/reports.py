"""Depth-comparison report rows and their JSON/CSV encodings."""

import csv
import io
import json
from pathlib import Path
from typing import Optional, Sequence, Union

from pydantic import BaseModel, ConfigDict

REPORT_FIELDS = (
    "name",
    "qubits",
    "cnot_count",
    "depth_naive",
    "depth_opt",
    "weighted_naive",
    "weighted_opt",
    "relative_improvement",
    "seed",
    "mode",
    "epr_naive",
    "epr_opt",
    "groups",
)


class DepthReport(BaseModel):
    """One (circuit, mode) comparison against the naive baseline."""

    model_config = ConfigDict(frozen=True)

    name: str
    qubits: int
    cnot_count: int
    depth_naive: int
    depth_opt: int
    weighted_naive: int
    weighted_opt: int
    relative_improvement: float
    seed: Optional[int] = None
    mode: str
    epr_naive: int = 0
    epr_opt: int = 0
    groups: int = 0

    @staticmethod
    def improvement(depth_naive: int, depth_opt: int) -> float:
        if depth_naive == 0:
            return 0.0
        return (depth_naive - depth_opt) / depth_naive


def reports_to_json(rows: Sequence[DepthReport]) -> str:
    return json.dumps([row.model_dump() for row in rows], indent=2) + "\n"


def reports_to_csv(rows: Sequence[DepthReport]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=REPORT_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        record = row.model_dump()
        record["seed"] = "" if record["seed"] is None else record["seed"]
        writer.writerow(record)
    return buffer.getvalue()


def read_reports_csv(text: str) -> list[DepthReport]:
    """Parse CSV written by ``reports_to_csv``."""
    rows = []
    for record in csv.DictReader(io.StringIO(text)):
        if record["seed"] == "":
            record["seed"] = None
        rows.append(DepthReport.model_validate(record))
    return rows


def write_reports(rows: Sequence[DepthReport], path: Union[str, Path], fmt: str = "json") -> Path:
    """Write rows as ``json`` or ``csv``.

    Raises:
        OSError: The file cannot be written.
        ValueError: Unknown format.
    """
    if fmt == "json":
        text = reports_to_json(rows)
    elif fmt == "csv":
        text = reports_to_csv(rows)
    else:
        raise ValueError(f"unknown report format '{fmt}'")
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path
