"""Storage and retrieval under a time-dependent control field.

The polariton is transported unchanged at v_g = c cos(theta)**2 while the
control ratio x(t) redistributes its noise between field and atoms. Every row
is the single-Lambda partition evaluated at x(t) (adiabatic following).
Time is dimensionless; lengths are reported in units of c.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .config import parse_key_values
from .gaussian import SqueezeSpec
from .single_lambda import (
    SingleLambdaParams,
    SingleLambdaReport,
    mixing_angle,
    single_lambda_report,
)

REPORT_COLUMNS = (
    "var_x_field", "var_y_field", "var_x_atom", "var_y_atom",
    "corr_x", "corr_y", "f", "ic", "v", "v_cs", "c",
)  # fmt: skip
TRAJECTORY_COLUMNS = ("t", "x", "theta", "v_g_over_c", "displacement_over_c") + REPORT_COLUMNS


@dataclass(frozen=True)
class ControlSchedule:
    """Samples of x(t) = Omega_c(t)/g, linear in between, constant outside."""

    times: tuple
    values: tuple

    def __post_init__(self):
        t = tuple(float(v) for v in self.times)
        x = tuple(float(v) for v in self.values)
        if len(t) == 0 or len(t) != len(x):
            raise ValueError("schedule needs equally many (>= 1) times and values")
        if any(b <= a for a, b in zip(t, t[1:])):
            raise ValueError("schedule times must be strictly increasing")
        if any(not math.isfinite(v) or v < 0 for v in x):
            raise ValueError("control ratios must be finite and >= 0")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", x)

    @classmethod
    def from_pairs(cls, pairs: Iterable[Sequence[float]]) -> "ControlSchedule":
        pairs = list(pairs)
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @classmethod
    def ramp_hold_ramp(
        cls, x_on: float = 3.0, t_ramp: float = 1.0, t_hold: float = 1.0
    ) -> "ControlSchedule":
        """Switch off over ``t_ramp``, store for ``t_hold``, switch back on."""
        return cls(
            (0.0, t_ramp, t_ramp + t_hold, 2 * t_ramp + t_hold),
            (x_on, 0.0, 0.0, x_on),
        )

    def __call__(self, t):
        return np.interp(t, self.times, self.values)


def group_velocity_ratio(x: float, n_atoms: float) -> float:
    """v_g / c = cos(theta)**2 = x**2 / (x**2 + N)."""
    SingleLambdaParams(x, n_atoms)
    return x * x / (x * x + n_atoms)


@dataclass(frozen=True)
class TrajectoryRow:
    t: float
    x: float
    theta: float
    v_g_over_c: float
    displacement_over_c: float
    report: SingleLambdaReport

    def as_dict(self) -> dict:
        d = self.report.as_dict()
        out = {
            "t": self.t,
            "x": self.x,
            "theta": self.theta,
            "v_g_over_c": self.v_g_over_c,
            "displacement_over_c": self.displacement_over_c,
        }
        out.update({k: d[k] for k in REPORT_COLUMNS})
        return out


@dataclass(frozen=True)
class PolaritonTrajectory:
    n_atoms: float
    spec: SqueezeSpec
    rows: tuple = field(repr=False)

    def __len__(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> np.ndarray:
        return np.array([row.as_dict()[name] for row in self.rows])

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(TRAJECTORY_COLUMNS)
        for row in self.rows:
            d = row.as_dict()
            writer.writerow([f"{d[k]:.17g}" for k in TRAJECTORY_COLUMNS])
        return buf.getvalue()


def evolve(
    schedule: ControlSchedule, n_atoms: float, spec: SqueezeSpec, t_grid: Sequence[float]
) -> PolaritonTrajectory:
    """Evaluate the noise partition along ``t_grid``.

    Displacement is the trapezoidal integral of cos(theta)**2 from t = 0
    (0 is inserted as a node when it is not on the grid).
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.ndim != 1 or t_grid.size == 0:
        raise ValueError("t_grid must be a non-empty 1-D sequence")
    if np.any(np.diff(t_grid) <= 0):
        raise ValueError("t_grid must be strictly increasing")

    nodes = np.union1d(t_grid, [0.0])
    x_nodes = schedule(nodes)
    vg_nodes = x_nodes**2 / (x_nodes**2 + n_atoms)
    steps = 0.5 * (vg_nodes[1:] + vg_nodes[:-1]) * np.diff(nodes)
    cumulative = np.concatenate([[0.0], np.cumsum(steps)])
    cumulative -= cumulative[np.searchsorted(nodes, 0.0)]
    displacement = cumulative[np.searchsorted(nodes, t_grid)]

    rows = []
    for t, disp in zip(t_grid, displacement):
        x = float(schedule(t))
        params = SingleLambdaParams(x, n_atoms)
        rows.append(
            TrajectoryRow(
                t=float(t),
                x=x,
                theta=mixing_angle(params),
                v_g_over_c=x * x / (x * x + params.n_atoms),
                displacement_over_c=float(disp),
                report=single_lambda_report(params, spec),
            )
        )
    return PolaritonTrajectory(float(n_atoms), spec, tuple(rows))


def read_schedule(text: str) -> ControlSchedule:
    """Parse a ``t,x`` CSV (with header) or a ``samples = t:x, t:x`` config."""
    lines = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.lstrip().startswith("#")]
    if not lines:
        raise ValueError("empty schedule")
    header = [h.strip().lower() for h in lines[0].split(",")]
    if header == ["t", "x"]:
        rows = list(csv.reader(lines[1:]))
        if any(len(row) != 2 for row in rows):
            raise ValueError("every schedule row needs exactly two values: t,x")
        return ControlSchedule.from_pairs([(float(t), float(x)) for t, x in rows])
    samples = parse_key_values(text).get("samples")
    if samples is None:
        raise ValueError("schedule must be a 't,x' CSV or contain a 'samples = t:x, ...' line")
    pairs = []
    for item in samples.split(","):
        t, sep, x = item.partition(":")
        if not sep:
            raise ValueError(f"schedule sample {item.strip()!r} is not 't:x'")
        pairs.append((float(t), float(x)))
    return ControlSchedule.from_pairs(pairs)
