"""Parameter sweeps, entanglement regions and the figure-reproduction presets.

Grid points are evaluated independently (optionally in a process pool) and
gathered in row-major order: the first axis varies slowest.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from . import double_lambda as dl
from . import single_lambda as sl
from .config import parse_float, parse_key_values
from .gaussian import SqueezeSpec

MODEL_PARAMETERS = {
    "single": ("x", "n_atoms", "r", "delta"),
    "double": ("y1", "y2", "n_atoms", "r", "delta"),
}
DERIVED_QUANTITIES = {"single": ("v_minus_vcs",), "double": ()}
CRITERIA = {
    "single": {"F": "f", "IC": "ic"},
    "double": {"G1": "g1", "G2": "g2", "H": "h", "IC_FA1": "ic_fa1", "IC_FA2": "ic_fa2", "IC_FF": "ic_ff"},
}
THRESHOLDS = {"F": 0.0, "G1": 0.0, "G2": 0.0, "H": 0.0, "IC": 1.0, "IC_FA1": 1.0, "IC_FA2": 1.0, "IC_FF": 1.0}

# SVG palette.
COLOR_ENTANGLED = "#1f77b4"
COLOR_SEPARABLE = "#f2f2f2"
COLOR_NEGATIVE = (31, 119, 180)
COLOR_POSITIVE = (214, 39, 40)
CURVE_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#e377c2", "#7f7f7f")


@dataclass(frozen=True)
class Axis:
    name: str
    min: float
    max: float
    count: int
    spacing: str = "linear"

    def __post_init__(self):
        object.__setattr__(self, "min", float(self.min))
        object.__setattr__(self, "max", float(self.max))
        if self.count != int(self.count) or int(self.count) < 2:
            raise ValueError(f"axis {self.name}: count must be an integer >= 2")
        object.__setattr__(self, "count", int(self.count))
        if not (math.isfinite(self.min) and math.isfinite(self.max)) or self.max <= self.min:
            raise ValueError(f"axis {self.name}: need finite min < max")
        if self.spacing not in ("linear", "log"):
            raise ValueError(f"axis {self.name}: spacing must be 'linear' or 'log'")
        if self.spacing == "log" and self.min <= 0:
            raise ValueError(f"axis {self.name}: log spacing requires min > 0")

    def values(self) -> np.ndarray:
        if self.spacing == "log":
            return np.geomspace(self.min, self.max, self.count)
        return np.linspace(self.min, self.max, self.count)


@dataclass(frozen=True)
class GridSpec:
    model: str
    axes: tuple
    fixed: Mapping[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.model not in MODEL_PARAMETERS:
            raise ValueError(f"model must be 'single' or 'double', got {self.model!r}")
        allowed = MODEL_PARAMETERS[self.model]
        axes = tuple(self.axes)
        if not 1 <= len(axes) <= 2:
            raise ValueError("a grid sweeps 1 or 2 axes")
        names = [a.name for a in axes]
        if len(set(names)) != len(names):
            raise ValueError("axis names must be distinct")
        for name in names:
            if name not in allowed:
                raise ValueError(f"axis {name!r} is not a parameter of the {self.model} model")
        fixed = {k: float(v) for k, v in dict(self.fixed).items()}
        for key in fixed:
            if key not in allowed:
                raise ValueError(f"fixed parameter {key!r} is not part of the {self.model} model")
            if key in names:
                raise ValueError(f"parameter {key!r} is both swept and fixed")
        missing = [p for p in allowed if p not in names and p not in fixed]
        if missing:
            raise ValueError(f"missing fixed values for: {', '.join(missing)}")
        object.__setattr__(self, "axes", axes)
        object.__setattr__(self, "fixed", fixed)

    @property
    def shape(self) -> tuple:
        return tuple(a.count for a in self.axes)

    @property
    def axis_names(self) -> tuple:
        return tuple(a.name for a in self.axes)

    def points(self) -> list[dict]:
        """Parameter dicts in row-major order."""
        grids = np.meshgrid(*[a.values() for a in self.axes], indexing="ij")
        flat = [g.ravel() for g in grids]
        out = []
        for i in range(flat[0].size):
            point = dict(self.fixed)
            for name, column in zip(self.axis_names, flat):
                point[name] = float(column[i])
            out.append(point)
        return out

    def metadata(self) -> dict:
        meta = {"model": self.model}
        for i, a in enumerate(self.axes, start=1):
            meta[f"axis{i}"] = f"{a.name} {a.min!r} {a.max!r} {a.count} {a.spacing}"
        for k in MODEL_PARAMETERS[self.model]:
            if k in self.fixed:
                meta[k] = repr(self.fixed[k])
        return meta


def parse_axis(text: str) -> Axis:
    """``name min max count [linear|log]``."""
    parts = text.split()
    if len(parts) not in (4, 5):
        raise ValueError(f"axis must be 'name min max count [linear|log]', got {text!r}")
    spacing = parts[4] if len(parts) == 5 else "linear"
    try:
        count = int(parts[3])
    except ValueError:
        raise ValueError(f"axis count must be an integer, got {parts[3]!r}") from None
    return Axis(parts[0], parse_float(parts[1]), parse_float(parts[2]), count, spacing)


def grid_from_mapping(values: Mapping[str, str]) -> GridSpec:
    """Build a GridSpec from ``model``, ``axis1``, ``axis2`` and parameter keys."""
    values = dict(values)
    model = values.pop("model", None)
    if model is None:
        raise ValueError("grid config needs a 'model' key")
    axes = [parse_axis(values.pop(k)) for k in ("axis1", "axis2") if k in values]
    if not axes:
        raise ValueError("grid config needs 'axis1' (and optionally 'axis2')")
    fixed = {}
    for key in MODEL_PARAMETERS.get(model, ()):
        if key in values:
            fixed[key] = parse_float(values.pop(key))
    return GridSpec(model, tuple(axes), fixed), values


def read_grid(text: str) -> tuple[GridSpec, dict]:
    """Parse a grid config; returns the grid and the unconsumed keys (e.g. quantity)."""
    return grid_from_mapping(parse_key_values(text))


def _params(model: str, point: Mapping[str, float]):
    spec = SqueezeSpec(point["r"], point["delta"])
    if model == "single":
        return sl.SingleLambdaParams(point["x"], point["n_atoms"]), spec
    return dl.DoubleLambdaParams(point["y1"], point["y2"], point["n_atoms"]), spec


def point_report(model: str, point: Mapping[str, float]):
    params, spec = _params(model, point)
    if model == "single":
        return sl.single_lambda_report(params, spec)
    return dl.double_lambda_report(params, spec)


def quantities(model: str) -> tuple:
    if model == "single":
        keys = tuple(sl.single_lambda_report(sl.SingleLambdaParams(1, 1), SqueezeSpec(0)).as_dict())
    else:
        keys = tuple(dl.double_lambda_report(dl.DoubleLambdaParams(1, 1, 1), SqueezeSpec(0)).as_dict())
    return keys + DERIVED_QUANTITIES[model]


def evaluate_point(model: str, names: Sequence[str], point: Mapping[str, float]) -> tuple:
    d = point_report(model, point).as_dict()
    if model == "single":
        d["v_minus_vcs"] = d["v"] - d["v_cs"]
    return tuple(d[n] for n in names)


def _evaluate_chunk(args) -> list:
    model, names, points = args
    return [evaluate_point(model, names, p) for p in points]


def _evaluate_grid(grid: GridSpec, names: Sequence[str], workers: int = 1) -> np.ndarray:
    points = grid.points()
    if workers <= 1 or len(points) < 2:
        rows = _evaluate_chunk((grid.model, tuple(names), points))
    else:
        size = max(1, math.ceil(len(points) / (4 * workers)))
        chunks = [(grid.model, tuple(names), points[i : i + size]) for i in range(0, len(points), size)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = [row for part in pool.map(_evaluate_chunk, chunks) for row in part]
    return np.array(rows, dtype=float).reshape(len(points), len(names))


def _format(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    return f"{float(value):.17g}"


def _csv_text(meta: Mapping[str, str], columns: Sequence[str], rows) -> str:
    buf = io.StringIO()
    for k, v in meta.items():
        for item in v if isinstance(v, list) else [v]:
            buf.write(f"# {k} = {item}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_format(v) for v in row])
    return buf.getvalue()


@dataclass
class SweepTable:
    grid: GridSpec
    quantities: tuple
    coords: np.ndarray  # (n_points, n_axes)
    values: np.ndarray  # (n_points, n_quantities)

    @property
    def columns(self) -> tuple:
        return self.grid.axis_names + self.quantities

    def column(self, name: str) -> np.ndarray:
        if name in self.grid.axis_names:
            return self.coords[:, self.grid.axis_names.index(name)]
        return self.values[:, self.quantities.index(name)]

    def metadata(self) -> dict:
        meta = self.grid.metadata()
        meta["quantities"] = " ".join(self.quantities)
        return meta

    def rows(self):
        return np.hstack([self.coords, self.values])

    def to_csv(self) -> str:
        return _csv_text(self.metadata(), self.columns, self.rows())

    def to_json(self) -> str:
        return json.dumps(
            {"metadata": self.metadata(), "columns": list(self.columns), "rows": self.rows().tolist()},
            indent=1,
        )

    def to_svg(self) -> str:
        if len(self.grid.axes) == 1:
            x = self.coords[:, 0]
            series = [(q, x, self.values[:, i]) for i, q in enumerate(self.quantities)]
            return _curves_svg(series, self.grid.axes[0].name)
        outer, inner = self.grid.axes
        if outer.count <= len(CURVE_COLORS):
            series = []
            for j in range(outer.count):
                sl_ = slice(j * inner.count, (j + 1) * inner.count)
                for i, q in enumerate(self.quantities):
                    label = f"{q} {outer.name}={self.coords[sl_.start, 0]:.6g}"
                    series.append((label, self.coords[sl_, 1], self.values[sl_, i]))
            return _curves_svg(series, inner.name)
        return _heatmap_svg(self.values[:, 0].reshape(self.grid.shape), self.grid, signed=True)


@dataclass
class RegionResult:
    grid: GridSpec
    criterion: str
    threshold: float
    values: np.ndarray  # grid.shape
    mask: np.ndarray  # values < threshold
    analytic_mask: np.ndarray
    boundary: dict | None

    @property
    def agreement(self) -> float:
        return float(np.mean(self.mask == self.analytic_mask))

    def metadata(self) -> dict:
        meta = self.grid.metadata()
        meta["criterion"] = self.criterion
        meta["threshold"] = repr(self.threshold)
        meta["entangled_points"] = str(int(self.mask.sum()))
        meta["analytic_agreement"] = repr(self.agreement)
        for k, v in (self.boundary or {}).items():
            if k == "curve":
                meta["boundary"] = [" ".join(f"{a}={b!r}" for a, b in e.items()) for e in v]
            else:
                meta[k] = v if isinstance(v, str) else repr(v)
        return meta

    @property
    def columns(self) -> tuple:
        return self.grid.axis_names + ("value", "entangled", "analytic_entangled")

    def _rows(self):
        coords = np.array([[p[n] for n in self.grid.axis_names] for p in self.grid.points()])
        return [
            (*c, v, m, a)
            for c, v, m, a in zip(coords, self.values.ravel(), self.mask.ravel(), self.analytic_mask.ravel())
        ]

    def to_csv(self) -> str:
        return _csv_text(self.metadata(), self.columns, self._rows())

    def to_json(self) -> str:
        rows = [[*map(float, row[:-2]), bool(row[-2]), bool(row[-1])] for row in self._rows()]
        return json.dumps(
            {"metadata": self.metadata(), "boundary": self.boundary, "columns": list(self.columns), "rows": rows},
            indent=1,
        )

    def to_svg(self) -> str:
        return _heatmap_svg(self.mask, self.grid, signed=False)


def sweep(grid: GridSpec, quantity: str | Sequence[str], workers: int = 1) -> SweepTable:
    """Tabulate one or more report quantities over the grid."""
    names = (quantity,) if isinstance(quantity, str) else tuple(quantity)
    if not names:
        raise ValueError("at least one quantity is required")
    valid = quantities(grid.model)
    for name in names:
        if name not in valid:
            raise ValueError(f"unknown quantity {name!r} for the {grid.model} model; choose from {', '.join(valid)}")
    coords = np.array([[p[n] for n in grid.axis_names] for p in grid.points()])
    return SweepTable(grid, names, coords, _evaluate_grid(grid, names, workers))


def _classifier(criterion: str):
    if criterion in ("F", "IC"):
        return lambda p, s: sl.in_window(p["x"], sl.entanglement_window(s))
    if criterion in ("G1", "IC_FA1"):
        return lambda p, s: dl.in_window(p["y1"], dl.field_atom_window(s))
    if criterion in ("G2", "IC_FA2"):
        return lambda p, s: dl.in_window(p["y2"], dl.field_atom_window(s))
    return lambda p, s: dl.in_wedge(p["y1"], p["y2"], dl.field_field_wedge(s))


def _boundary(criterion: str, grid: GridSpec) -> dict | None:
    swept_spec = [n for n in grid.axis_names if n in ("r", "delta")]
    wedge = criterion in ("H", "IC_FF")
    lo, hi = ("slope_lower", "slope_upper") if wedge else ("window_lower", "window_upper")
    kind = "wedge" if wedge else "window"

    def bounds(spec):
        b = dl.field_field_wedge(spec) if wedge else sl.entanglement_window(spec)
        return (None, None) if b is None else b

    if not swept_spec:
        spec = SqueezeSpec(grid.fixed["r"], grid.fixed["delta"])
        a, b = bounds(spec)
        return {"boundary_kind": kind, lo: "none" if a is None else a, hi: "none" if b is None else b}
    if len(swept_spec) == 2:
        return None
    name = swept_spec[0]
    other = "delta" if name == "r" else "r"
    entries = []
    for value in grid.axes[grid.axis_names.index(name)].values():
        spec = SqueezeSpec(**{name: float(value), other: grid.fixed[other]})
        a, b = bounds(spec)
        entries.append({name: float(value), "lower": a, "upper": b})
    return {"boundary_kind": kind, "curve": entries}


def region(grid: GridSpec, criterion: str, workers: int = 1) -> RegionResult:
    """Criterion values, strict sign mask and the closed-form classification."""
    if criterion not in CRITERIA[grid.model]:
        raise ValueError(
            f"criterion {criterion!r} does not apply to the {grid.model} model; "
            f"choose from {', '.join(CRITERIA[grid.model])}"
        )
    if len(grid.axes) != 2:
        raise ValueError("region extraction needs exactly 2 swept axes")
    key = CRITERIA[grid.model][criterion]
    threshold = THRESHOLDS[criterion]
    values = _evaluate_grid(grid, (key,), workers)[:, 0].reshape(grid.shape)
    classify = _classifier(criterion)
    analytic = np.array(
        [classify(p, SqueezeSpec(p["r"], p["delta"])) for p in grid.points()], dtype=bool
    ).reshape(grid.shape)
    return RegionResult(grid, criterion, threshold, values, values < threshold, analytic, _boundary(criterion, grid))


@dataclass(frozen=True)
class Preset:
    name: str
    description: str
    grid: GridSpec
    quantities: tuple = ()
    criterion: str | None = None

    def run(self, workers: int = 1):
        if self.criterion is not None:
            return region(self.grid, self.criterion, workers)
        return sweep(self.grid, self.quantities, workers)


PRESETS = {
    p.name: p
    for p in (
        Preset(
            "fig2",
            "field-atom correlation corr_x vs x for r in {0.5, 1, 1.5}; N=10, delta=0",
            GridSpec("single", (Axis("r", 0.5, 1.5, 3), Axis("x", 0.0, 10.0, 200)), {"n_atoms": 10, "delta": 0}),
            quantities=("corr_x",),
        ),
        Preset(
            "fig3b",
            "F<0 region over (x, delta) at r=1",
            GridSpec("single", (Axis("x", 0.0, 5.0, 200), Axis("delta", 0.0, 2 * math.pi, 200)), {"n_atoms": 10, "r": 1}),
            criterion="F",
        ),
        Preset(
            "fig3c",
            "F<0 region over (delta, r) at x=1",
            GridSpec("single", (Axis("delta", 0.0, 2 * math.pi, 200), Axis("r", 0.015, 3.0, 200)), {"n_atoms": 10, "x": 1}),
            criterion="F",
        ),
        Preset(
            "fig3d",
            "F<0 region over (x, r) at delta=0",
            GridSpec("single", (Axis("x", 0.0, 5.0, 200), Axis("r", 0.015, 3.0, 200)), {"n_atoms": 10, "delta": 0}),
            criterion="F",
        ),
        Preset(
            "fig4",
            "V - V_CS and C vs r at x=0.3, N=10, delta=0",
            GridSpec("single", (Axis("r", 0.0, 3.0, 301),), {"x": 0.3, "n_atoms": 10, "delta": 0}),
            quantities=("v_minus_vcs", "c"),
        ),
        Preset(
            "fig6",
            "field-field correlation corr_x_12 vs y1 for r in {0.5, 1, 1.5}; y2=1, N=10, delta=0",
            GridSpec("double", (Axis("r", 0.5, 1.5, 3), Axis("y1", 0.0, 10.0, 200)), {"y2": 1, "n_atoms": 10, "delta": 0}),
            quantities=("corr_x_12",),
        ),
        Preset(
            "fig7a",
            "field-field region IC_FF over (y1, y2); r=1, delta=pi",
            GridSpec("double", (Axis("y1", 0.0, 5.0, 201), Axis("y2", 0.0, 5.0, 201)), {"n_atoms": 10, "r": 1, "delta": math.pi}),
            criterion="IC_FF",
        ),
        Preset(
            "fig7b",
            "field-atom region IC_FA1 over (y1, y2); r=1, delta=0",
            GridSpec("double", (Axis("y1", 0.0, 5.0, 201), Axis("y2", 0.0, 5.0, 201)), {"n_atoms": 10, "r": 1, "delta": 0}),
            criterion="IC_FA1",
        ),
        Preset(
            "fig7c",
            "field-field region IC_FF over (y1, y2); r=2, delta=pi",
            GridSpec("double", (Axis("y1", 0.0, 5.0, 201), Axis("y2", 0.0, 5.0, 201)), {"n_atoms": 10, "r": 2, "delta": math.pi}),
            criterion="IC_FF",
        ),
        Preset(
            "fig7d",
            "field-atom region IC_FA1 over (y1, y2); r=2, delta=0",
            GridSpec("double", (Axis("y1", 0.0, 5.0, 201), Axis("y2", 0.0, 5.0, 201)), {"n_atoms": 10, "r": 2, "delta": 0}),
            criterion="IC_FA1",
        ),
    )
}


# SVG output: 640x480 canvas, 60 px margins.
_W, _H, _M = 640, 480, 60


def _svg_frame(body: list[str], xlabel: str, ylabel: str, xr, yr) -> str:
    head = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" viewBox="0 0 {_W} {_H}">',
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    axes = [
        f'<rect x="{_M}" y="{_M}" width="{_W - 2 * _M}" height="{_H - 2 * _M}" fill="none" stroke="black"/>',
        f'<text x="{_W / 2}" y="{_H - 15}" text-anchor="middle" font-size="14">{xlabel}</text>',
        f'<text x="15" y="{_H / 2}" text-anchor="middle" font-size="14" transform="rotate(-90 15 {_H / 2})">{ylabel}</text>',
        f'<text x="{_M}" y="{_H - _M + 16}" font-size="11">{xr[0]:.4g}</text>',
        f'<text x="{_W - _M}" y="{_H - _M + 16}" text-anchor="end" font-size="11">{xr[1]:.4g}</text>',
        f'<text x="{_M - 4}" y="{_H - _M}" text-anchor="end" font-size="11">{yr[0]:.4g}</text>',
        f'<text x="{_M - 4}" y="{_M + 10}" text-anchor="end" font-size="11">{yr[1]:.4g}</text>',
    ]
    return "\n".join(head + body + axes + ["</svg>"]) + "\n"


def _curves_svg(series, xlabel: str) -> str:
    xs = np.concatenate([s[1] for s in series])
    ys = np.concatenate([s[2] for s in series])
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if y1 == y0:
        y0, y1 = y0 - 1.0, y1 + 1.0
    sx = (_W - 2 * _M) / (x1 - x0)
    sy = (_H - 2 * _M) / (y1 - y0)
    body = []
    for k, (label, x, y) in enumerate(series):
        color = CURVE_COLORS[k % len(CURVE_COLORS)]
        pts = " ".join(f"{_M + (a - x0) * sx:.2f},{_H - _M - (b - y0) * sy:.2f}" for a, b in zip(x, y))
        body.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{pts}"/>')
        body.append(f'<text x="{_W - _M - 4}" y="{_M + 16 + 14 * k}" text-anchor="end" font-size="11" fill="{color}">{label}</text>')
    return _svg_frame(body, xlabel, "value", (x0, x1), (y0, y1))


def _heatmap_svg(data: np.ndarray, grid: GridSpec, signed: bool) -> str:
    """Cells colored by mask (entangled/separable) or by signed magnitude."""
    ax0, ax1 = grid.axes
    nx, ny = ax0.count, ax1.count
    cw, ch = (_W - 2 * _M) / nx, (_H - 2 * _M) / ny
    scale = float(np.max(np.abs(data))) if signed else 1.0
    body = []
    for i in range(nx):
        for j in range(ny):
            v = data[i, j]
            if signed:
                frac = 0.0 if scale == 0 else min(1.0, abs(float(v)) / scale)
                base = COLOR_NEGATIVE if v < 0 else COLOR_POSITIVE
                rgb = tuple(round(255 + (c - 255) * frac) for c in base)
                color = "#%02x%02x%02x" % rgb
            else:
                color = COLOR_ENTANGLED if v else COLOR_SEPARABLE
            x = _M + i * cw
            y = _H - _M - (j + 1) * ch
            body.append(f'<rect x="{x:.2f}" y="{y:.2f}" width="{cw + 0.05:.2f}" height="{ch + 0.05:.2f}" fill="{color}"/>')
    return _svg_frame(body, ax0.name, ax1.name, (ax0.min, ax0.max), (ax1.min, ax1.max))
