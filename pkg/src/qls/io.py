"""File ingestion and emission: strict JSON, atomic CSV/JSON writes, schemas."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from pathlib import Path

import jsonschema

__all__ = [
    "InputError",
    "read_json_object",
    "resolve_input",
    "write_csv",
    "write_json",
    "dumps_json",
    "load_schema",
    "validate_output",
    "data_path",
]


class InputError(ValueError):
    """Unreadable, malformed or inconsistent input file."""


def _no_duplicates(pairs):
    out = {}
    for k, v in pairs:
        if k in out:
            raise InputError(f"duplicate key {k!r}")
        out[k] = v
    return out


def _reject_constant(name):
    raise InputError(f"non-finite number {name} is not valid JSON")


def data_path(*parts: str) -> Path:
    """Path of a file shipped in the package ``data`` directory."""
    return Path(__file__).resolve().parent.joinpath("data", *parts)


def resolve_input(path, kind: str) -> Path:
    """Return ``path`` if it exists, else the shipped data file of that name.

    ``kind`` is the data subdirectory (``species`` or ``hyperfine``).
    """
    p = Path(path)
    if p.exists():
        return p
    if p.parent == Path("."):
        shipped = data_path(kind, p.name)
        if shipped.exists():
            return shipped
    raise InputError(f"{path}: file not found")


def read_json_object(path) -> dict:
    """Parse a JSON file whose top level must be an object.

    Duplicate keys and NaN/Infinity literals are rejected.
    """
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise InputError(f"{path}: cannot read ({exc.strerror or exc})") from None
    try:
        obj = json.loads(text, object_pairs_hook=_no_duplicates, parse_constant=_reject_constant)
    except InputError as exc:
        raise InputError(f"{path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: malformed JSON ({exc.msg} at line {exc.lineno})") from None
    if not isinstance(obj, dict):
        raise InputError(f"{path}: top-level JSON value must be an object")
    return obj


def _atomic_write(path, data: bytes) -> None:
    path = Path(path)
    directory = path.parent if str(path.parent) else Path(".")
    fd, tmp = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=directory)
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow(row)
    return buf.getvalue()


def write_csv(path, header, rows) -> None:
    """Write a CSV with ``header`` atomically (temp file, then rename)."""
    _atomic_write(path, csv_text(header, rows).encode("utf-8"))


def _finite(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        raise ValueError("refusing to emit a non-finite number as JSON")
    if isinstance(obj, dict):
        for v in obj.values():
            _finite(v)
    elif isinstance(obj, (list, tuple)):
        for v in obj:
            _finite(v)


def dumps_json(obj) -> str:
    _finite(obj)
    return json.dumps(obj, indent=2, sort_keys=True, allow_nan=False) + "\n"


def write_json(path, obj) -> None:
    _atomic_write(path, dumps_json(obj).encode("utf-8"))


def load_schema(name: str) -> dict:
    with open(data_path("schemas", f"{name}.schema.json"), encoding="utf-8") as fh:
        return json.load(fh)


def validate_output(obj, schema_name: str) -> None:
    """Raise ``jsonschema.ValidationError`` if ``obj`` violates the shipped schema."""
    jsonschema.validate(obj, load_schema(schema_name))


def schema_errors(obj, schema_name: str) -> list[str]:
    validator = jsonschema.Draft202012Validator(load_schema(schema_name))
    out = []
    for err in sorted(validator.iter_errors(obj), key=lambda e: list(e.path)):
        where = "/".join(str(p) for p in err.path) or "<root>"
        out.append(f"{where}: {err.message}")
    return out
