"""
Aggregated result tables as CSV, JSON or an SVG heatmap.

CSV columns follow CSV_HEADER exactly. Floats are written with 17
significant digits so a parse-back recovers every value bit for bit.
"""

import csv
import io
import json
import logging
import math
import sys
from dataclasses import asdict, is_dataclass
from pathlib import Path

from sketchlab.constants import CSV_HEADER, FLOAT_FORMAT
from sketchlab.errors import DomainError, TensorFileError
from sketchlab.ui.heatmap import render_heatmaps

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json", "svg")
INT_COLUMNS = frozenset({"n1", "n2", "n3", "r0", "r", "trials", "rank_flag_failures", "master_seed"})
STR_COLUMNS = frozenset({"kind", "noise_mode"})


def format_value(value):
    if isinstance(value, bool):
        return str(int(value))
    if isinstance(value, float):
        return format(value, FLOAT_FORMAT)
    return str(value)


def _rows_and_metadata(table, metadata):
    rows = getattr(table, "rows", table)
    meta = dict(getattr(table, "metadata", {}) or {})
    meta.update(metadata or {})
    return list(rows), meta


def format_csv(rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for row in rows:
        writer.writerow([format_value(getattr(row, name)) for name in CSV_HEADER])
    return buf.getvalue()


def parse_csv(text):
    """Rows of a results CSV as dicts with int/float/str values restored."""
    reader = csv.DictReader(io.StringIO(text))
    if tuple(reader.fieldnames or ()) != CSV_HEADER:
        raise DomainError(f"unexpected CSV header {reader.fieldnames}")
    parsed = []
    for raw in reader:
        parsed.append(
            {
                name: raw[name]
                if name in STR_COLUMNS
                else int(raw[name])
                if name in INT_COLUMNS
                else float(raw[name])
                for name in CSV_HEADER
            }
        )
    return parsed


def _finite_or_none(value):
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {k: _finite_or_none(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_finite_or_none(v) for v in value]
    return value


def format_json(rows, metadata=None):
    payload = {
        "columns": list(CSV_HEADER),
        "rows": [asdict(row) if is_dataclass(row) else dict(row) for row in rows],
        "metadata": metadata or {},
    }
    return json.dumps(_finite_or_none(payload), indent=2, sort_keys=True, allow_nan=False) + "\n"


def _write_text(text, path):
    if path is None:
        sys.stdout.write(text)
        return
    path = Path(path)
    try:
        path.write_text(text, encoding="utf-8", newline="")
    except OSError as exc:
        raise TensorFileError(f"cannot write {path}: {exc}") from exc


def emit_results(table, fmt="csv", path=None, metadata=None):
    """
    Write a results table (ExperimentResult or list of ResultRow) to `path`,
    or to stdout when path is None. Returns the written text.
    """
    if fmt not in FORMATS:
        raise DomainError(f"unknown output format {fmt!r}; expected one of {FORMATS}")
    rows, meta = _rows_and_metadata(table, metadata)
    if fmt == "csv":
        text = format_csv(rows)
    elif fmt == "json":
        text = format_json(rows, meta)
    else:
        text = render_heatmaps(rows, title=meta.get("kind"))

    _write_text(text, path)
    logger.info("wrote %d rows as %s to %s", len(rows), fmt, path or "stdout")
    return text


def load_results_csv(path):
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise TensorFileError(f"cannot read {path}: {exc}") from exc
    return parse_csv(text)


def emit_document(payload, path=None):
    """Write a free-form JSON report (bound evaluations, lemma checks, comparisons)."""
    text = json.dumps(_finite_or_none(payload), indent=2, sort_keys=True, allow_nan=False) + "\n"
    _write_text(text, path)
    return text
