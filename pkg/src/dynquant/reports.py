"""Tabular reports written as CSV or JSON.

CSV output is byte-stable for a given configuration.  JSON carries the same
rows plus a metadata block; versions and the timestamp sit in a separate
``header`` block that stable mode leaves out.
"""
from __future__ import annotations

import csv
import io
import json
import platform
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Dict, List, Sequence

import numpy as np

from . import __version__

SPECTRUM_COLUMNS = ("epsilon", "kappa", "s", "n", "m_prime", "E_numeric", "E_analytic", "rel_err",
                    "error_estimate", "grid_sizes", "breach")


def format_value(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, (list, tuple)):
        return ";".join(format_value(v) for v in value)
    return str(value)


def _json_value(value):
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return v if np.isfinite(v) else str(v)
    if isinstance(value, (list, tuple)):
        return [_json_value(v) for v in value]
    if isinstance(value, dict):
        return {k: _json_value(v) for k, v in value.items()}
    return value


@dataclass
class Report:
    command: str
    columns: Sequence[str]
    rows: List[Dict[str, object]] = field(default_factory=list)
    metadata: Dict[str, object] = field(default_factory=dict)

    def add(self, **row):
        unknown = set(row) - set(self.columns)
        if unknown:
            raise KeyError(f"unknown columns {sorted(unknown)}")
        self.rows.append(row)

    @property
    def breaches(self) -> int:
        return sum(1 for r in self.rows if r.get("breach"))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_value(row.get(c)) for c in self.columns])
        return buf.getvalue()

    def to_json(self, stable: bool = False) -> str:
        doc = {}
        if not stable:
            doc["header"] = {
                "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
                "package_version": __version__,
                "python": platform.python_version(),
                "numpy": np.__version__,
            }
        doc["metadata"] = _json_value(dict(sorted(self.metadata.items())))
        doc["command"] = self.command
        doc["columns"] = list(self.columns)
        doc["rows"] = [{c: _json_value(r.get(c)) for c in self.columns} for r in self.rows]
        return json.dumps(doc, indent=2, sort_keys=False) + "\n"

    def render(self, fmt: str = "csv", stable: bool = False) -> str:
        if fmt == "csv":
            return self.to_csv()
        if fmt == "json":
            return self.to_json(stable)
        raise ValueError(f"unknown format {fmt!r}")
