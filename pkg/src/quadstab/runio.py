"""CSV and manifest output with float round-trip guarantees.

CSV cells use '.' as decimal separator and 17 significant digits so that
64-bit floats survive a write/read cycle bit-exactly.  Manifests are flat
key=value text files with [section] headers, sufficient to rerun the
producing experiment.
"""

from __future__ import annotations

import csv
import hashlib
import time
from pathlib import Path


def fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def write_csv(path, header, rows):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])
    return path


def content_hash(config: dict) -> str:
    """Deterministic sha1 of the canonical config text."""
    text = "\n".join(f"{k}={fmt(v)}" for k, v in sorted(config.items()))
    return hashlib.sha1(text.encode()).hexdigest()


def write_manifest(path, subcommand, config, seed, version, wall_seconds, extra=None):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = ["[run]",
             f"subcommand = {subcommand}",
             f"version = {version}",
             f"seed = {seed}",
             f"content_hash = {content_hash(config)}",
             f"wall_seconds = {fmt(float(wall_seconds))}",
             f"written_at = {time.strftime('%Y-%m-%dT%H:%M:%S')}",
             "",
             "[config]"]
    for key in sorted(config):
        lines.append(f"{key} = {fmt(config[key])}")
    if extra:
        lines.append("")
        lines.append("[summary]")
        for key in sorted(extra):
            lines.append(f"{key} = {fmt(extra[key])}")
    path.write_text("\n".join(lines) + "\n")
    return path


def read_manifest(path):
    """Parse a manifest back into {section: {key: str-value}}."""
    sections: dict[str, dict[str, str]] = {}
    current = None
    for raw in Path(path).read_text().splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if line.startswith("[") and line.endswith("]"):
            current = line[1:-1]
            sections[current] = {}
            continue
        if current is None or "=" not in line:
            continue
        key, _, value = line.partition("=")
        sections[current][key.strip()] = value.strip()
    return sections
