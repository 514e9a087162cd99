"""File formats: distributions, channels, distribution pairs and row reports."""

import csv
import io as _io
import json
import math

import numpy as np

from .distributions import check_channel, check_distribution


class InputError(Exception):
    """File could not be read or parsed."""


def _read_text(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _parse_numbers(row, where):
    try:
        return [float(v) for v in row if v.strip() != ""]
    except ValueError as exc:
        raise InputError(f"non-numeric value in {where}: {exc}") from exc


def parse_pair(text, name="<input>"):
    """Parse ``{"p": [...], "q": [...]}`` JSON or two-line CSV into raw lists."""
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            obj = json.loads(text)
            p, q = obj["p"], obj["q"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise InputError(f"{name}: expected JSON object with 'p' and 'q': {exc}") from exc
        return [float(v) for v in p], [float(v) for v in q]
    rows = [r for r in csv.reader(_io.StringIO(text)) if any(c.strip() for c in r)]
    if len(rows) != 2:
        raise InputError(f"{name}: CSV input needs exactly two rows, got {len(rows)}")
    return _parse_numbers(rows[0], name), _parse_numbers(rows[1], name)


def read_pair(path):
    return parse_pair(_read_text(path), str(path))


def distribution_to_json(p):
    return {"mass": [float(v) for v in p]}


def distribution_from_json(obj):
    return check_distribution(obj["mass"])


def channel_to_json(h):
    return {"rows": [[float(v) for v in row] for row in np.asarray(h)]}


def channel_from_json(obj):
    return check_channel(obj["rows"])


def read_distributions_csv(text):
    """One distribution per CSV row."""
    rows = [r for r in csv.reader(_io.StringIO(text)) if any(c.strip() for c in r)]
    return [check_distribution(_parse_numbers(r, "csv row")) for r in rows]


def _fmt(v):
    if isinstance(v, float):
        return "nan" if math.isnan(v) else f"{v:.12g}"
    return str(v)


def rows_to_csv(rows, columns):
    """Serialize dict rows; floats get 12 significant digits."""
    buf = _io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(row.get(c, "")) for c in columns])
    return buf.getvalue()


def _jsonable(obj):
    if isinstance(obj, float) and not math.isfinite(obj):
        return None if math.isnan(obj) else ("inf" if obj > 0 else "-inf")
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return _jsonable(obj.item())
    return obj


def to_json(obj):
    """Deterministic JSON with full double precision; non-finite floats become strings/null."""
    return json.dumps(_jsonable(obj), indent=2, sort_keys=True) + "\n"
