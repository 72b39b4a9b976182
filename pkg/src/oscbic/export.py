"""Deterministic file output: CSV and JSON with a resolved-config header.

Numbers are written with 17 significant digits so payload rows round-trip
doubles exactly and re-runs with an identical configuration are byte-identical
(headers carry a timestamp and may differ in that line only).
"""

from __future__ import annotations

import json
import datetime as _dt
from pathlib import Path


ARTIFACT = "oscbic"


def _version() -> str:
    from . import __version__

    return __version__


def format_number(value) -> str:
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if value is None:
        return ""
    return format(float(value), ".17g")


def _timestamp() -> str:
    return _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds")


def csv_header_lines(config: dict) -> list[str]:
    return [
        f"# artifact: {ARTIFACT} {_version()}",
        f"# generated: {_timestamp()}",
        f"# config: {json.dumps(config, sort_keys=True)}",
    ]


def write_csv(path: Path, columns: list[str], rows, config: dict) -> Path:
    path = Path(path)
    lines = csv_header_lines(config)
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(format_number(v) if not isinstance(v, str) else v for v in row))
    path.write_text("\n".join(lines) + "\n")
    return path


def write_json(path: Path, data, config: dict) -> Path:
    path = Path(path)
    payload = {
        "artifact": ARTIFACT,
        "version": _version(),
        "generated": _timestamp(),
        "config": config,
        "data": data,
    }
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return path


def read_csv_rows(path: Path) -> tuple[list[str], list[list[str]]]:
    """Parse a CSV written by write_csv back into (columns, string rows)."""
    lines = [ln for ln in Path(path).read_text().splitlines() if not ln.startswith("#")]
    columns = lines[0].split(",")
    return columns, [ln.split(",") for ln in lines[1:]]
