"""Check rows, reports and their JSON/CSV emitters."""

from __future__ import annotations

import csv
import io
import json
import math
import platform
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

import numpy as np
import scipy

from jetex._errors import ContractError

from ._experiment import FORMATS

# Anchor of rows that check the runner itself rather than a mathematical claim.
PLUMBING = "plumbing"
ROW_FIELDS = ("suite", "id", "anchor", "measured", "claimed", "pass", "tolerance")


def clean_value(value: Any) -> Any:
    """JSON-safe copy: numpy scalars to Python, non-finite floats to strings."""
    if isinstance(value, np.generic):
        value = value.item()
    if isinstance(value, complex):
        return {"re": clean_value(value.real), "im": clean_value(value.imag)}
    if isinstance(value, float) and not math.isfinite(value):
        return "nan" if math.isnan(value) else ("inf" if value > 0 else "-inf")
    if isinstance(value, np.ndarray):
        return [clean_value(v) for v in value.tolist()]
    if isinstance(value, Mapping):
        return {str(k): clean_value(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [clean_value(v) for v in value]
    return value


@dataclass(frozen=True)
class CheckRow:
    """One measured claim.

    Attributes:
        suite: Suite that produced the row
        id: Dotted check identifier, unique within a report
        anchor: The statement checked, or ``"plumbing"``
        measured: Measured value (number, list or message)
        claimed: Claimed value or bound
        passed: Whether the measurement satisfies the claim within ``tolerance``
        tolerance: Tolerance of the comparison (``None`` for exact checks)
    """

    suite: str
    id: str
    anchor: str
    measured: Any
    claimed: Any
    passed: bool
    tolerance: float | None = None

    def __post_init__(self) -> None:
        if not self.anchor:
            raise ContractError(f"Check {self.id!r} needs an anchor or {PLUMBING!r}")

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "id": self.id,
            "anchor": self.anchor,
            "measured": clean_value(self.measured),
            "claimed": clean_value(self.claimed),
            "pass": bool(self.passed),
            "tolerance": clean_value(self.tolerance),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> CheckRow:
        return cls(
            str(data["suite"]),
            str(data["id"]),
            str(data["anchor"]),
            data["measured"],
            data["claimed"],
            bool(data["pass"]),
            data.get("tolerance"),
        )


def environment(seed: int | None) -> dict[str, Any]:
    """Versions and seed recorded with every report; no timings or host names."""
    from jetex import __version__

    return {
        "jetex": __version__,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "seed": seed,
    }


@dataclass(frozen=True)
class Report:
    """Rows of one run, in execution order, with environment metadata."""

    suite: str
    rows: tuple[CheckRow, ...]
    environment: dict[str, Any] = field(default_factory=dict)
    config: dict[str, Any] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(row.passed for row in self.rows)

    @property
    def failures(self) -> list[CheckRow]:
        return [row for row in self.rows if not row.passed]

    @property
    def exit_code(self) -> int:
        return 0 if self.rows and self.passed else 1

    def to_dict(self) -> dict[str, Any]:
        return {
            "suite": self.suite,
            "passed": self.passed,
            "count": len(self.rows),
            "failures": len(self.failures),
            "environment": clean_value(self.environment),
            "config": clean_value(self.config),
            "rows": [row.to_dict() for row in self.rows],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> Report:
        """Rebuild a report from :meth:`to_dict` output.

        Raises:
            ContractError: If a key is missing or the row count disagrees
        """
        try:
            rows = tuple(CheckRow.from_dict(row) for row in data["rows"])
            report = cls(
                str(data["suite"]), rows, dict(data["environment"]), dict(data.get("config", {}))
            )
            count = int(data["count"])
        except (KeyError, TypeError, ValueError) as e:
            msg = f"Malformed report: {e}"
            raise ContractError(msg) from e
        if count != len(rows):
            raise ContractError(f"Report claims {count} rows but holds {len(rows)}")
        return report


def render(report: Report, fmt: str = "json") -> str:
    """Serialize a report; identical reports give identical text.

    JSON keeps the field order of :meth:`Report.to_dict`. CSV is long format
    with one line per row and the columns of :data:`ROW_FIELDS`.

    Raises:
        ValueError: For formats other than json and csv
    """
    if fmt not in FORMATS:
        raise ValueError(f"Unknown report format {fmt!r}; expected json or csv")
    if fmt == "json":
        return json.dumps(report.to_dict(), indent=2, ensure_ascii=False) + "\n"
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=ROW_FIELDS, lineterminator="\n")
    writer.writeheader()
    for row in report.rows:
        writer.writerow({k: _csv_cell(v) for k, v in row.to_dict().items()})
    return buffer.getvalue()


def _csv_cell(value: Any) -> Any:
    if isinstance(value, dict | list):
        return json.dumps(value, ensure_ascii=False)
    if value is None:
        return ""
    return value


def emit(report: Report, output_path: str | Path, fmt: str = "json") -> Path:
    """Write :func:`render` output to ``output_path``, creating parent directories."""
    text = render(report, fmt)
    output_path = Path(output_path).expanduser()
    output_path.parent.mkdir(parents=True, exist_ok=True)
    output_path.write_text(text, encoding="utf-8")
    return output_path


def load_report(json_path: str | Path) -> Report:
    """Read a JSON report written by :func:`emit`.

    Raises:
        FileNotFoundError: If the file does not exist
        ContractError: If the content is not a report
    """
    json_path = Path(json_path).expanduser()
    if not json_path.exists():
        raise FileNotFoundError(f"Report not found: {json_path}")
    try:
        data = json.loads(json_path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as e:
        msg = f"Invalid JSON in {json_path}: {e}"
        raise ContractError(msg) from e
    return Report.from_dict(data)


__all__ = [
    "PLUMBING",
    "ROW_FIELDS",
    "CheckRow",
    "Report",
    "clean_value",
    "emit",
    "environment",
    "load_report",
    "render",
]
