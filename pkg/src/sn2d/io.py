"""CSV / JSON serialisation with fixed formatting so reruns are byte-identical."""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

from sn2d.errors import BadParamsError
from sn2d.functionals import RadialProfile

SCHEMA_VERSION = "1"


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def write_csv(path, header: list[str], columns) -> None:
    rows = zip(*[np.asarray(c, dtype=float) for c in columns])
    with open(path, "w", newline="") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(fmt(v) for v in row) + "\n")


def write_profile_csv(path, profile: RadialProfile) -> None:
    write_csv(path, ["r", "u"], [profile.grid, profile.values])


def read_profile_csv(path, interp: str = "CUBIC") -> RadialProfile:
    """Read an ``r,u`` table; NaN, negative u or non-increasing r are rejected."""
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = [h.strip() for h in next(reader, [])]
        if header[:2] != ["r", "u"]:
            raise BadParamsError(f"{path}: expected header 'r,u', got {','.join(header)!r}")
        r, u = [], []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                rv, uv = float(row[0]), float(row[1])
            except (ValueError, IndexError) as exc:
                raise BadParamsError(f"{path}:{lineno}: bad row {row!r}") from exc
            if math.isnan(rv) or math.isnan(uv) or uv < 0:
                raise BadParamsError(f"{path}:{lineno}: NaN or negative entry")
            r.append(rv)
            u.append(uv)
    return RadialProfile(np.array(r), np.array(u), interp=interp)


def write_solution_csv(path, sol) -> None:
    write_csv(path, ["r", "u", "W", "Wp"], [sol.r, sol.u, sol.W, sol.Wp])


def write_branch_csv(path, points) -> None:
    write_csv(
        path,
        ["gamma", "lambda", "omega", "e0"],
        [[p.gamma for p in points], [p.lam for p in points], [p.omega for p in points], [p.e0 for p in points]],
    )


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def to_json(payload: dict) -> str:
    """Serialise with a schema_version field; floats use shortest round-trip repr."""
    body = {"schema_version": SCHEMA_VERSION, **_clean(payload)}
    return json.dumps(body, indent=2) + "\n"


def write_json(path, payload: dict) -> None:
    Path(path).write_text(to_json(payload))
