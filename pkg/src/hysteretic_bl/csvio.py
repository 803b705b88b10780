"""CSV output at full double precision."""

import csv
import math
from pathlib import Path


def fmt(v):
    """Format a cell: floats with 17 significant digits, ``None`` as empty."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (int, str)):
        return str(v)
    v = float(v)
    if math.isnan(v):
        return "nan"
    return format(v, ".17g")


def write_csv(target, header, rows):
    """Write ``rows`` under ``header`` to a path or an open text stream."""
    if hasattr(target, "write"):
        _emit(target, header, rows)
        return None
    path = Path(target)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        _emit(fh, header, rows)
    return path


def _emit(fh, header, rows):
    w = csv.writer(fh, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])


def read_csv(path):
    """Header and rows of a CSV written by :func:`write_csv`, as strings."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]
