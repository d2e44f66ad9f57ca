"""CSV datasets and JSON run manifests."""

from __future__ import annotations

import hashlib
import json
import platform
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np
import scipy


def format_value(value: Any) -> str:
    """12 significant digits, scientific notation; -0 printed as 0."""
    if isinstance(value, (str, bool)):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    x = float(value)
    if x == 0.0:
        x = 0.0
    if np.isnan(x):
        return "nan"
    return f"{x:.11e}"


@dataclass(frozen=True, eq=False)
class Dataset:
    name: str
    header: tuple[str, ...]
    rows: list[tuple[Any, ...]]
    meta: dict[str, Any] = field(default_factory=dict)

    @classmethod
    def from_columns(cls, name: str, columns: dict[str, np.ndarray], meta: dict | None = None) -> Dataset:
        header = tuple(columns)
        rows = list(zip(*(np.asarray(c) for c in columns.values())))
        return cls(name, header, rows, dict(meta or {}))

    def to_csv(self) -> str:
        lines = [",".join(self.header)]
        lines += [",".join(format_value(v) for v in row) for row in self.rows]
        return "\n".join(lines) + "\n"

    def column(self, key: str) -> list[Any]:
        k = self.header.index(key)
        return [row[k] for row in self.rows]


def _versions() -> dict[str, str]:
    from vicsim import __version__

    return {
        "vicsim": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }


@dataclass
class RunManifest:
    command: str
    argv: list[str]
    params: list[dict[str, Any]]
    eigensolver: dict[str, str]
    tolerances: dict[str, float]
    outputs: list[dict[str, Any]] = field(default_factory=list)
    settings: dict[str, Any] = field(default_factory=dict)
    versions: dict[str, str] = field(default_factory=_versions)
    timestamp: str = field(default_factory=lambda: datetime.now(timezone.utc).isoformat(timespec="seconds"))

    def as_dict(self) -> dict[str, Any]:
        return {
            "schema_version": 1,
            "command": self.command,
            "argv": self.argv,
            "timestamp": self.timestamp,
            "versions": self.versions,
            "params": self.params,
            "settings": self.settings,
            "eigensolver": self.eigensolver,
            "tolerances": self.tolerances,
            "outputs": self.outputs,
        }


def write_outputs(
    out_dir: str | Path,
    manifest: RunManifest,
    datasets: Sequence[Dataset],
    reports: Iterable[tuple[str, Any]] = (),
) -> Path:
    """Write each dataset as ``<name>.csv`` plus JSON reports and one manifest."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for ds in datasets:
        body = ds.to_csv()
        path = out / f"{ds.name}.csv"
        path.write_text(body, encoding="utf-8")
        manifest.outputs.append(
            {
                "file": path.name,
                "sha256": hashlib.sha256(body.encode("utf-8")).hexdigest(),
                "rows": len(ds.rows),
                "columns": list(ds.header),
            }
        )
    for name, payload in reports:
        body = json.dumps(payload, indent=2, sort_keys=True) + "\n"
        path = out / f"{name}.json"
        path.write_text(body, encoding="utf-8")
        manifest.outputs.append({"file": path.name, "sha256": hashlib.sha256(body.encode("utf-8")).hexdigest()})
    manifest_path = out / f"{manifest.command}_manifest.json"
    manifest_path.write_text(json.dumps(manifest.as_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return manifest_path

