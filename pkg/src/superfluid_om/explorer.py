"""Parameter sweeps and one-dimensional figure-of-merit optimisation."""

from __future__ import annotations

import csv
import io
import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from .config import FIGURES_OF_MERIT, SWEEP_PARAMETERS
from .errors import DomainError, OptimizationError, QuadratureError, ValidationError
from .pipeline import ROW_COLUMNS, evaluate, figure_of_merit, select_modes

INV_PHI = (math.sqrt(5) - 1) / 2


class SweepCapError(ValueError):
    def __init__(self, required, cap):
        self.required = required
        self.cap = cap
        super().__init__(f"sweep needs {required} evaluations; raise the cap to at least {required} (now {cap})")


@dataclass(frozen=True)
class SweepAxis:
    parameter: str
    values: tuple

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ValidationError("parameter", f"must be one of {', '.join(SWEEP_PARAMETERS)}")
        values = tuple(float(v) for v in self.values)
        if not values:
            raise ValidationError("values", "axis needs at least one value")
        if any(not (math.isfinite(v) and v > 0) for v in values):
            raise ValidationError("values", "must be finite and positive")
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ValidationError("values", "must be strictly ascending")
        object.__setattr__(self, "values", values)

    @classmethod
    def grid(cls, parameter, lo, hi, count, scale="linear"):
        if count < 1:
            raise ValidationError("count", "must be >= 1")
        if count == 1:
            return cls(parameter, (lo,))
        space = np.geomspace if scale == "log" else np.linspace
        return cls(parameter, tuple(space(lo, hi, count).tolist()))

    @classmethod
    def from_config(cls, axis):
        if axis.values is not None:
            return cls(axis.parameter, tuple(axis.values))
        return cls.grid(axis.parameter, axis.min, axis.max, axis.count, axis.scale)

    def __len__(self):
        return len(self.values)


@dataclass
class SweepResult:
    axes: list
    fom: str
    rows: list = field(default_factory=list)
    best_index: int | None = None

    @property
    def columns(self):
        return [a.parameter for a in self.axes] + list(ROW_COLUMNS) + ["fom", "error"]

    @property
    def best(self):
        return None if self.best_index is None else self.rows[self.best_index]

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([_cell(row.get(c)) for c in self.columns])
        return buf.getvalue()

    def best_json(self):
        summary = {
            "fom": self.fom,
            "rows": len(self.rows),
            "flagged_rows": sum(1 for r in self.rows if r.get("error")),
            "best_row_index": self.best_index,
            "best": self.best,
        }
        return json.dumps(summary, indent=2, sort_keys=True)


def _cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    return str(value)


def apply_parameter(config, parameter, value):
    """Copy of ``config`` with one sweepable parameter set."""
    if parameter in ("radius", "length"):
        return config.replace_section("geometry", **{parameter: value})
    if parameter in ("c4", "x3"):
        return config.replace_section("helium", **{parameter: value})
    if parameter == "temperature":
        return config.replace_section("measurement", temperature=value)
    if parameter == "fmax":
        return config.replace_section("modes", fmax_hz=value)
    raise ValidationError("parameter", f"unknown parameter {parameter!r}")


_ROW_ERRORS = (DomainError, QuadratureError, ValidationError, ArithmeticError, ValueError)


def sweep(axes, config, selection="fixed", fom="g0_magnitude", *, target_hz=None, cap=1_000_000):
    """Full Cartesian sweep in axis-major order (first axis slowest)."""
    if not axes:
        raise ValidationError("axes", "at least one axis is required")
    if fom not in FIGURES_OF_MERIT:
        raise ValidationError("fom", f"must be one of {', '.join(FIGURES_OF_MERIT)}")
    points = math.prod(len(a) for a in axes)
    if points > cap:
        raise SweepCapError(points, cap)
    result = SweepResult(list(axes), fom)
    best_value = None
    for combo in itertools.product(*(a.values for a in axes)):
        point = dict(zip((a.parameter for a in axes), combo))
        try:
            cfg = config
            for name, value in point.items():
                cfg = apply_parameter(cfg, name, value)
            indices = select_modes(cfg, selection, target_hz)
        except _ROW_ERRORS as exc:
            result.rows.append({**point, "error": f"{type(exc).__name__}: {exc}"})
            continue
        if not indices:
            result.rows.append({**point, "error": "no acoustic mode within 1% of the target"})
            continue
        for idx in indices:
            if len(result.rows) >= cap:
                raise SweepCapError(len(result.rows) + 1, cap)
            try:
                row = {**point, **evaluate(cfg, idx)}
                value = figure_of_merit(row, fom)
                row["fom"] = value
                row["error"] = None if value is not None and math.isfinite(value) else f"{fom} unavailable"
            except _ROW_ERRORS as exc:
                row = {**point, "acoustic_index": str(idx), "error": f"{type(exc).__name__}: {exc}"}
            result.rows.append(row)
            if row.get("error") is None and (best_value is None or row["fom"] > best_value):
                best_value = row["fom"]
                result.best_index = len(result.rows) - 1
    return result


def sweep_from_config(config):
    axes = [SweepAxis.from_config(a) for a in config.sweep.axes]
    s = config.sweep
    return sweep(axes, config, s.selection, s.fom, target_hz=s.target_hz, cap=s.cap)


def golden_section_max(func, lo, hi, rtol=1e-4):
    """Maximise a unimodal ``func`` on [lo, hi]; returns (x, f(x))."""
    a, b = float(lo), float(hi)
    tol = rtol * max(abs(a), abs(b), 1e-300)
    c = b - INV_PHI * (b - a)
    d = a + INV_PHI * (b - a)
    fc, fd = func(c), func(d)
    while b - a > tol:
        if fc >= fd:
            b, d, fd = d, c, fc
            c = b - INV_PHI * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + INV_PHI * (b - a)
            fd = func(d)
    return (c, fc) if fc >= fd else (d, fd)


def grid_then_golden(func, lo, hi, grid=32, rtol=1e-4):
    """Best of a uniform grid, refined by golden section between its neighbours.

    Never returns a point worse than the best grid point.
    """
    lo, hi = float(lo), float(hi)
    if not lo <= hi:
        raise ValidationError("interval", "lower bound must not exceed upper bound")

    def checked(x):
        y = func(x)
        if y is None or not math.isfinite(y):
            raise OptimizationError("objective is not finite", x)
        return float(y)

    if lo == hi:
        return lo, checked(lo)
    xs = np.linspace(lo, hi, grid).tolist()
    ys = [checked(x) for x in xs]
    i = int(np.argmax(ys))
    left = xs[max(i - 1, 0)]
    right = xs[min(i + 1, len(xs) - 1)]
    x, y = golden_section_max(checked, left, right, rtol)
    if y >= ys[i]:
        return x, y
    return xs[i], ys[i]


def optimize_1d(parameter, interval, config, fom, *, acoustic_index=None, grid=32, rtol=1e-4):
    """Maximise a figure of merit over one continuous parameter.

    ``fom`` may be a figure-of-merit id, evaluated through the full model
    chain at the configured (or given) acoustic mode, or a plain callable of
    the parameter value.
    """
    lo, hi = interval
    if callable(fom):
        return grid_then_golden(fom, lo, hi, grid, rtol)
    if parameter not in ("radius", "length", "c4", "temperature"):
        raise ValidationError("parameter", "must be radius, length, c4 or temperature")
    if not lo > 0:
        raise ValidationError("interval", "must be positive")
    from .acoustics import AcousticModeIndex

    idx = acoustic_index or AcousticModeIndex.parse(config.modes.acoustic)

    def objective(value):
        try:
            row = evaluate(apply_parameter(config, parameter, value), idx)
        except _ROW_ERRORS as exc:
            raise OptimizationError(f"evaluation failed ({exc})", value) from exc
        return figure_of_merit(row, fom)

    return grid_then_golden(objective, lo, hi, grid, rtol)

