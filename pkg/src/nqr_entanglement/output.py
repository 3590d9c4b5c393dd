"""CSV and JSON serialisation of results."""
from __future__ import annotations

import contextlib
import csv
import io
import json
import math
import os
import sys

from .conventions import run_metadata
from .entanglement import EntanglementReport
from .errors import OutputError
from .scan import CriticalPoint, SweepResult

STDOUT = "-"


def format_float(x) -> str:
    """17 significant digits: enough to round-trip any double."""
    return format(x, ".17g")


def _cell(v) -> str:
    if isinstance(v, float):
        return format_float(v)
    return str(v)


@contextlib.contextmanager
def _open_sink(sink):
    if sink is None or sink == STDOUT:
        yield sys.stdout
    elif hasattr(sink, "write"):
        yield sink
    else:
        try:
            fh = open(sink, "w", encoding="utf-8", newline="")
        except OSError as exc:
            raise OutputError(f"cannot write {sink}: {exc}") from exc
        with fh:
            yield fh


def _write(text: str, sink) -> None:
    try:
        with _open_sink(sink) as fh:
            fh.write(text)
    except OutputError:
        raise
    except OSError as exc:
        raise OutputError(f"cannot write {os.fspath(sink)}: {exc}") from exc


def render_csv(result: SweepResult) -> str:
    if not result.rows:
        raise ValueError("refusing to write an empty result")
    buf = io.StringIO()
    for key, value in result.meta.items():
        buf.write(f"# {key}: {json.dumps(_jsonable(value), sort_keys=True)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(result.columns)
    for row in result.rows:
        writer.writerow([_cell(v) for v in row])
    return buf.getvalue()


def emit_csv(result: SweepResult, sink=STDOUT) -> None:
    """Write ``result`` as CSV: ``#`` metadata lines, a header, one row per point.

    Nothing is written (and no file is created) when ``result`` is empty.
    """
    _write(render_csv(result), sink)


def _jsonable(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if hasattr(obj, "item"):
        return _jsonable(obj.item())
    return obj


def to_document(result, meta: dict | None = None) -> dict:
    if isinstance(result, SweepResult):
        doc = {"columns": list(result.columns),
               "rows": [dict(zip(result.columns, r)) for r in result.rows]}
        meta = result.meta if meta is None else meta
    elif isinstance(result, EntanglementReport):
        doc = result.to_dict()
        if meta is None:
            meta = run_metadata(result.mapping)
    elif isinstance(result, CriticalPoint):
        doc = result.to_dict()
    elif isinstance(result, dict):
        doc = dict(result)
    else:
        raise TypeError(f"cannot serialise {type(result).__name__}")
    doc["meta"] = run_metadata() if meta is None else meta
    return _jsonable(doc)


def as_table(result, meta: dict | None = None) -> SweepResult:
    """One-row table for a non-grid result, so it can go through :func:`emit_csv`."""
    if isinstance(result, SweepResult):
        return result
    doc = to_document(result, meta)
    meta = doc.pop("meta")
    flat = {}
    for key, value in doc.items():
        if isinstance(value, list) and not any(isinstance(v, (list, dict)) for v in value):
            flat.update((f"{key}{i + 1}", v) for i, v in enumerate(value))
        elif isinstance(value, (list, dict)):
            raise TypeError(f"{key!r} is nested and has no CSV form")
        else:
            flat[key] = value
    return SweepResult(tuple(flat), [tuple(flat.values())], meta)


def render_json(result, meta: dict | None = None) -> str:
    return json.dumps(to_document(result, meta), indent=2) + "\n"


def emit_json(result, sink=STDOUT, meta: dict | None = None) -> None:
    """Write a single JSON document with the result's fields and a ``meta`` object."""
    _write(render_json(result, meta), sink)
