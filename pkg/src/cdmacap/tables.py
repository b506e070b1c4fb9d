"""Grid parsing and deterministic CSV/JSON table output."""

import io
import json
import math
import sys

import numpy as np

ANALYTIC_COLUMNS = (
    "beta", "kappa", "a_star", "t_star", "capacity_nats", "capacity_bits",
    "clamped", "iterations", "residual",
)
SIMULATE_COLUMNS = (
    "trial", "seed", "users", "chips", "realized_beta", "kappa", "count", "capacity_bits",
)
SUMMARY_COLUMNS = ("trials", "zero_trials", "mean_bits", "std_bits")
OUTAGE_COLUMNS = ("ebn0_db", "kappa", "ber", "rate_bits", "clamped")


def parse_grid(text):
    """Parse ``start:stop:points[:log|lin]`` items and plain numbers, comma separated.

    >>> parse_grid("0,0.5,1")
    [0.0, 0.5, 1.0]
    >>> parse_grid("1:100:3:log")
    [1.0, 10.0, 100.0]
    """
    values = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            raise ValueError(f"empty item in {text!r}")
        if ":" not in item:
            values.append(float(item))
            continue
        parts = item.split(":")
        if len(parts) not in (3, 4):
            raise ValueError(f"grid {item!r} is not start:stop:points[:log|lin]")
        start, stop, n = float(parts[0]), float(parts[1]), int(parts[2])
        scale = parts[3] if len(parts) == 4 else "lin"
        if n < 1:
            raise ValueError(f"grid {item!r} needs at least one point")
        if scale == "lin":
            pts = np.linspace(start, stop, n)
        elif scale == "log":
            if start <= 0 or stop <= 0:
                raise ValueError(f"log grid {item!r} needs positive endpoints")
            pts = np.geomspace(start, stop, n)
        else:
            raise ValueError(f"unknown grid scale {scale!r} in {item!r}")
        values.extend(float(v) for v in pts)
    if any(not math.isfinite(v) for v in values):
        raise ValueError(f"non-finite value in {text!r}")
    return values


def format_value(value):
    """CSV cell text: 12 significant digits for reals, lower-case booleans."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".12g")


def _json_value(value):
    if value is None or isinstance(value, (bool, np.bool_)):
        return None if value is None else bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    v = float(format(float(value), ".12g"))
    return v if math.isfinite(v) else None


def render_table(rows, columns, fmt="csv"):
    if fmt == "csv":
        buf = io.StringIO()
        buf.write(",".join(columns) + "\n")
        for row in rows:
            buf.write(",".join(format_value(row.get(col)) for col in columns) + "\n")
        return buf.getvalue()
    if fmt == "json":
        records = [{col: _json_value(row.get(col)) for col in columns} for row in rows]
        return json.dumps(records, indent=1) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def emit_table(rows, columns, fmt="csv", path=None):
    """Write rows (dicts keyed by column name) to ``path``, or stdout if None."""
    for row in rows:
        extra = set(row) - set(columns)
        if extra:
            raise ValueError(f"row has columns outside the schema: {sorted(extra)}")
    text = render_table(rows, columns, fmt)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    return text
