"""Run configuration and serialisation (CSV, JSON, SVG)."""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import DomainError, R4BPError

TRAJECTORY_HEADER = ("t", "x", "y", "z", "vx", "vy", "vz", "C")
EQUILIBRIA_HEADER = ("name", "x", "y", "grad_norm", "A", "B", "D", "class")
REGION_HEADER = ("x", "y", "value", "allowed")
SWEEP_HEADER = ("mu", "A_L1", "B_L1", "D_L1", "A_L3", "B_L3", "D_L3")


class ConfigError(DomainError):
    """A run configuration violates a range rule; names the field."""


class OutputError(R4BPError, OSError):
    pass


def fmt(x) -> str:
    """Decimal text with 17 significant digits (lossless for doubles)."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        x = float(x)
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return format(x, ".17g")
    return str(x)


def dumps_json(obj: Any, indent: int = 2, _level: int = 0) -> str:
    """JSON text with floats at 17 significant digits; NaN/inf become null."""
    pad = " " * (indent * (_level + 1))
    end = " " * (indent * _level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(str(k))}: {dumps_json(v, indent, _level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        if all(not isinstance(v, (dict, list, tuple, np.ndarray)) for v in seq):
            return "[" + ", ".join(dumps_json(v, indent, _level + 1) for v in seq) + "]"
        return "[\n" + ",\n".join(pad + dumps_json(v, indent, _level + 1) for v in seq) + "\n" + end + "]"
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (float, np.floating)):
        return "null" if not math.isfinite(float(obj)) else fmt(obj)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, complex):
        return dumps_json([obj.real, obj.imag], indent, _level)
    return json.dumps(str(obj))


def _open(path, mode="w"):
    try:
        return open(path, mode, newline="")
    except OSError as exc:
        raise OutputError(f"cannot open {path}: {exc.strerror}") from exc


def write_csv(path_or_file, header: Sequence[str], rows: Iterable[Sequence]) -> None:
    def _write(fh):
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([fmt(v) for v in row])

    if hasattr(path_or_file, "write"):
        _write(path_or_file)
    else:
        with _open(path_or_file) as fh:
            _write(fh)


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Header and float array from a numeric CSV (empty cells read as NaN)."""
    with _open(path, "r") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array([[float(v) if v else np.nan for v in r] for r in body], dtype=float)
    return header, data.reshape(len(body), len(header))


def trajectory_rows(traj) -> list:
    return [(t, *s, c) for t, s, c in zip(traj.times, traj.states, traj.jacobi)]


def region_rows(grid) -> list:
    rows = []
    xs, ys = grid.xs, grid.ys
    for i in range(grid.nx):
        for j in range(grid.ny):
            v = "" if grid.singular[i, j] else grid.values[i, j]
            rows.append((xs[i], ys[j], v, int(grid.mask[i, j])))
    return rows


def contours_svg(contour_set, grid) -> str:
    """One ``<path>`` per polyline; viewBox equals the grid bounds."""
    (x0, x1), (y0, y1) = grid.x_bounds, grid.y_bounds
    width = x1 - x0
    stroke = fmt(0.002 * max(width, y1 - y0))
    lines = [
        '<svg xmlns="http://www.w3.org/2000/svg" '
        f'viewBox="{fmt(x0)} {fmt(y0)} {fmt(width)} {fmt(y1 - y0)}">'
    ]
    for poly, closed in zip(contour_set.polylines, contour_set.closed):
        pts = poly[:-1] if closed else poly
        d = "M " + " L ".join(f"{fmt(p[0])} {fmt(p[1])}" for p in pts)
        if closed:
            d += " Z"
        lines.append(f'<path d="{d}" fill="none" stroke="black" stroke-width="{stroke}"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def write_text(path, text: str) -> None:
    with _open(path) as fh:
        fh.write(text)


# ---------------------------------------------------------------- RunConfig

_INTEGRATE_KEYS = {"state0", "t_span", "rel_tol", "abs_tol", "max_step", "max_steps", "samples"}
_OUTPUT_KEYS = {"trajectory", "summary"}
_TOP_KEYS = {"problem", "mu", "m3", "integrate", "output"}


@dataclass(frozen=True)
class RunConfig:
    problem: str
    mu: float
    m3: float | None = None
    integrate: dict = field(default_factory=dict)
    output: dict = field(default_factory=dict)

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("config must be a JSON object")
        _reject_unknown(data, _TOP_KEYS, "")
        problem = data.get("problem", "limit")
        if problem not in ("limit", "full"):
            raise ConfigError(f"problem: must be 'limit' or 'full', got {problem!r}")
        if "mu" not in data:
            raise ConfigError("mu: required")
        mu = _number(data["mu"], "mu")
        m3 = data.get("m3")
        if problem == "limit":
            if not 0.0 <= mu <= 0.5:
                raise ConfigError(f"mu: must lie in [0, 1/2], got {mu}")
            if m3 is not None:
                raise ConfigError("m3: only allowed for problem 'full'")
        else:
            if m3 is None:
                raise ConfigError("m3: required for problem 'full'")
            m3 = _number(m3, "m3")
            if not 0.0 < mu <= 0.5:
                raise ConfigError(f"mu: must lie in (0, 1/2] for the full problem, got {mu}")
            if not 0.0 <= m3 <= min(mu, 1.0 - mu - m3):
                raise ConfigError(f"m3: must lie in [0, min(m1, m2)], got {m3}")

        integ = dict(data.get("integrate", {}))
        _reject_unknown(integ, _INTEGRATE_KEYS, "integrate.")
        if "state0" in integ:
            s = integ["state0"]
            if not (isinstance(s, list) and len(s) == 6):
                raise ConfigError("integrate.state0: must be a list of 6 numbers")
            integ["state0"] = [_number(v, "integrate.state0") for v in s]
        if "t_span" in integ:
            ts = integ["t_span"]
            if not (isinstance(ts, list) and len(ts) == 2):
                raise ConfigError("integrate.t_span: must be [t0, t1]")
            t0, t1 = (_number(v, "integrate.t_span") for v in ts)
            if not t1 > t0:
                raise ConfigError(f"integrate.t_span: t1 must exceed t0, got {ts}")
            integ["t_span"] = [t0, t1]
        for key in ("rel_tol", "abs_tol"):
            if key in integ:
                v = _number(integ[key], f"integrate.{key}")
                if not 1e-15 <= v <= 1e-2:
                    raise ConfigError(f"integrate.{key}: must lie in [1e-15, 1e-2], got {v}")
                integ[key] = v
        if "max_step" in integ:
            v = _number(integ["max_step"], "integrate.max_step")
            if not v > 0:
                raise ConfigError(f"integrate.max_step: must be positive, got {v}")
            integ["max_step"] = v
        for key in ("max_steps", "samples"):
            if key in integ:
                v = integ[key]
                if not (isinstance(v, int) and not isinstance(v, bool) and v >= (2 if key == "samples" else 1)):
                    raise ConfigError(f"integrate.{key}: must be an integer >= "
                                      f"{2 if key == 'samples' else 1}, got {v!r}")

        out = dict(data.get("output", {}))
        _reject_unknown(out, _OUTPUT_KEYS, "output.")
        for k, v in out.items():
            if not isinstance(v, str):
                raise ConfigError(f"output.{k}: must be a path string")
        return cls(problem, mu, m3, integ, out)

    @classmethod
    def load(cls, path) -> "RunConfig":
        try:
            with open(path) as fh:
                data = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"config: cannot read {path}: {exc.strerror}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: invalid JSON in {path}: {exc}") from exc
        return cls.from_dict(data)


def _reject_unknown(d: dict, allowed: set, prefix: str):
    unknown = sorted(set(d) - allowed)
    if unknown:
        raise ConfigError(f"{prefix}{unknown[0]}: unknown key (allowed: {', '.join(sorted(allowed))})")


def _number(v, name: str) -> float:
    if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
        raise ConfigError(f"{name}: must be a finite number, got {v!r}")
    return float(v)
