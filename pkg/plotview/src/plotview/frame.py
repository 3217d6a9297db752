"""Parsing of the sweep CSV contract.

The producing tool writes a '#'-prefixed manifest (key = value lines), one
header row, and one data row per noise point. This module validates the
schema and groups rows into plottable series; it never recomputes any
statistic.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Tuple

REQUIRED_COLUMNS = (
    "p_s",
    "p_m",
    "p_f",
    "trials",
    "t_max",
    "mean_lifetime",
    "stderr",
    "censored",
    "baseline",
)

_FLOAT_COLUMNS = ("p_s", "p_m", "p_f", "mean_lifetime", "stderr", "baseline")


class SchemaError(ValueError):
    """CSV does not conform to the sweep contract; names the offender."""


@dataclass
class SweepRow:
    p_s: float
    p_m: float
    p_f: float
    mean_lifetime: float
    stderr: float
    baseline: float


@dataclass
class SweepFrame:
    """One CSV file: manifest, validated rows, and the detected sweep axis."""

    source: str
    manifest: Dict[str, str]
    rows: List[SweepRow] = field(default_factory=list)

    @property
    def varied(self) -> str:
        """Which of p_s/p_m/p_f changes across rows ('p' when they move
        together, as in a uniform-noise sweep)."""
        moving = [
            name
            for name in ("p_s", "p_m", "p_f")
            if len({getattr(r, name) for r in self.rows}) > 1
        ]
        if not moving:
            return "p_s"
        if len(moving) == 3:
            return "p"
        return moving[-1]

    def axis_values(self) -> List[float]:
        name = self.varied
        col = "p_s" if name == "p" else name
        return [getattr(r, col) for r in self.rows]

    @property
    def label(self) -> str:
        stem = Path(self.source).stem
        return f"{stem} ({self.varied})"

    @classmethod
    def read(cls, path: str) -> "SweepFrame":
        text = Path(path).read_text()
        manifest: Dict[str, str] = {}
        body: List[str] = []
        for line in text.splitlines():
            if line.startswith("#"):
                stripped = line.lstrip("#").strip()
                if "=" in stripped:
                    key, _, value = stripped.partition("=")
                    manifest[key.strip()] = value.strip()
                continue
            if line.strip():
                body.append(line)
        if not body:
            raise SchemaError(f"{path}: no CSV body")
        reader = csv.DictReader(body)
        header = reader.fieldnames or []
        for col in REQUIRED_COLUMNS:
            if col not in header:
                raise SchemaError(f"{path}: missing required column '{col}'")
        frame = cls(source=path, manifest=manifest)
        for lineno, record in enumerate(reader, start=2):
            values = {}
            for col in _FLOAT_COLUMNS:
                raw = record.get(col)
                try:
                    values[col] = float(raw)
                except (TypeError, ValueError):
                    raise SchemaError(
                        f"{path}: line {lineno}: column '{col}' is not numeric: {raw!r}"
                    )
            frame.rows.append(SweepRow(**values))
        if not frame.rows:
            raise SchemaError(f"{path}: header present but no data rows")
        return frame
