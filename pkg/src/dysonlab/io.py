"""Deterministic CSV/JSON serialization and run manifests.

CSV files carry one fixed header row, RFC-4180 quoting, LF line endings and
floats at 17 significant digits; JSON is written with sorted keys.  Identical
inputs therefore produce byte-identical files.
"""

from __future__ import annotations

import csv
import hashlib
import json
import os
from typing import Any, Iterable, Sequence


def format_value(value: Any) -> Any:
    if isinstance(value, float):
        return f"{value:.17g}"
    return value


def write_csv(path: str, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    try:
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
            writer.writerow(header)
            for row in rows:
                writer.writerow([format_value(v) for v in row])
    except OSError as exc:
        raise OSError(f"failed writing CSV {path}: {exc}") from exc


def read_csv(path: str) -> tuple[list[str], list[list[str]]]:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            rows = list(reader)
    except OSError as exc:
        raise OSError(f"failed reading CSV {path}: {exc}") from exc
    if not rows:
        raise OSError(f"CSV {path} is empty (missing header)")
    return rows[0], rows[1:]


def write_json(path: str, payload: Any) -> None:
    try:
        with open(path, "w") as fh:
            json.dump(payload, fh, sort_keys=True, indent=2)
            fh.write("\n")
    except OSError as exc:
        raise OSError(f"failed writing JSON {path}: {exc}") from exc


def content_hash(payload: Any) -> str:
    """Short stable hash of a JSON-serializable parameter set."""
    blob = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()[:12]


def run_directory(out_dir: str, name: str, parameters: Any) -> str:
    path = os.path.join(out_dir, f"{name}-{content_hash(parameters)}")
    os.makedirs(path, exist_ok=True)
    return path


def worker_count() -> int:
    """Parallelism cap: DYSON_THREADS, defaulting to hardware concurrency."""
    env = os.environ.get("DYSON_THREADS")
    if env is not None:
        try:
            value = int(env)
        except ValueError:
            raise OSError(f"DYSON_THREADS must be an integer, got {env!r}") from None
        return max(1, value)
    return os.cpu_count() or 1
