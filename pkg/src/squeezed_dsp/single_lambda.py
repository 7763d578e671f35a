"""Closed forms for a squeezed dark-state polariton in a single-Lambda medium.

The polariton is cos(theta) E - sin(theta) b with b = sqrt(N) sigma the
bosonized collective atomic mode; ``x`` is the control ratio Omega_c / g.
Atomic statistics are reported for sigma, i.e. rescaled from b by 1/N
(variances) and 1/sqrt(N) (correlations).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from .gaussian import ModeDecomposition, SqueezeSpec

CSV_COLUMNS = (
    "x", "n_atoms", "r", "delta",
    "var_x_field", "var_y_field", "var_x_atom", "var_y_atom",
    "corr_x", "corr_y", "f", "ic", "v", "v_cs", "c",
)  # fmt: skip


@dataclass(frozen=True)
class SingleLambdaParams:
    x: float
    n_atoms: float

    def __post_init__(self):
        x, n = float(self.x), float(self.n_atoms)
        if not math.isfinite(x) or x < 0:
            raise ValueError(f"control ratio x must be finite and >= 0, got {self.x!r}")
        if not math.isfinite(n) or n < 1:
            raise ValueError(f"n_atoms must be finite and >= 1, got {self.n_atoms!r}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "n_atoms", n)


@dataclass(frozen=True)
class SingleLambdaReport:
    x: float
    n_atoms: float
    r: float
    delta: float
    theta: float
    var_x_field: float
    var_y_field: float
    var_x_atom: float
    var_y_atom: float
    corr_x: float
    corr_y: float
    f_value: float
    ic_normalized: float
    v_total: float
    v_cs: float
    c_corr: float

    def as_dict(self) -> dict:
        """Flat mapping using the CSV column names (plus ``theta``)."""
        d = asdict(self)
        d["f"] = d.pop("f_value")
        d["ic"] = d.pop("ic_normalized")
        d["v"] = d.pop("v_total")
        d["c"] = d.pop("c_corr")
        return d

    def csv_row(self) -> list:
        d = self.as_dict()
        return [d[k] for k in CSV_COLUMNS]


def mixing_angle(params: SingleLambdaParams) -> float:
    """theta = arctan(sqrt(N) / x), equal to pi/2 at x = 0."""
    return math.atan2(math.sqrt(params.n_atoms), params.x)


def polariton_decomposition(params: SingleLambdaParams) -> ModeDecomposition:
    """Coefficients of the polariton over (field, b) with b = sqrt(N) sigma."""
    theta = mixing_angle(params)
    return ModeDecomposition((math.cos(theta), -math.sin(theta)))


def input_variances(spec: SqueezeSpec) -> tuple[float, float]:
    """(Var X_in, Var Y_in) of the squeezed polariton vacuum."""
    c2, s2 = math.cosh(2 * spec.r), math.sinh(2 * spec.r)
    cd = math.cos(spec.delta)
    return c2 - s2 * cd, c2 + s2 * cd


def _partition(x2: float, n: float, v_in: float) -> tuple[float, float]:
    den = x2 + n
    return (x2 * v_in + n) / den, (x2 + n * v_in) / (n * den)


def variance_partition(params: SingleLambdaParams, spec: SqueezeSpec) -> tuple[float, float, float, float]:
    """Returns (var_x_field, var_y_field, var_x_atom, var_y_atom)."""
    vx, vy = input_variances(spec)
    x2, n = params.x**2, params.n_atoms
    fx, ax = _partition(x2, n, vx)
    fy, ay = _partition(x2, n, vy)
    return fx, fy, ax, ay


def approx_variance_partition(
    params: SingleLambdaParams, spec: SqueezeSpec, quadrature: str = "x"
) -> tuple[float, float]:
    """First-order forms of (field, atom) variances for x**2 << N.

    The regime is not enforced.
    """
    vx, vy = input_variances(spec)
    v_in = {"x": vx, "y": vy}[quadrature]
    ratio = params.x**2 / params.n_atoms
    field = 1.0 - ratio * (1.0 - v_in)
    atom = (v_in + ratio * (1.0 - v_in)) / params.n_atoms
    return field, atom


def field_atom_correlation(params: SingleLambdaParams, spec: SqueezeSpec) -> tuple[float, float]:
    """(<X_E X_sigma>, <Y_E Y_sigma>)."""
    vx, vy = input_variances(spec)
    k = params.x / (params.x**2 + params.n_atoms)
    return k * (1.0 - vx), k * (1.0 - vy)


def squeezing_numerator(y: float, spec: SqueezeSpec) -> float:
    """(y**2 + 1) sinh(r)**2 - 2 y sinh(r) cosh(r) cos(delta)."""
    sh, ch = math.sinh(spec.r), math.cosh(spec.r)
    return (y * y + 1.0) * sh * sh - 2.0 * y * sh * ch * math.cos(spec.delta)


def f_function(params: SingleLambdaParams, spec: SqueezeSpec) -> float:
    """Entangled iff negative; independent of N."""
    return squeezing_numerator(params.x, spec)


def ic_normalized(params: SingleLambdaParams, spec: SqueezeSpec) -> float:
    """Duan sum divided by its separable bound 2 + 2/N; entangled iff < 1."""
    n = params.n_atoms
    return 1.0 + (2.0 / (1.0 + 1.0 / n)) * f_function(params, spec) / (params.x**2 + n)


def roots_window(cos_delta: float, r: float) -> tuple[float, float] | None:
    """Roots of y**2 - 2 y coth(r) cos_delta + 1, or None without a real gap.

    None also when the roots coincide, since the quadratic is then never negative.
    """
    if r <= 0:
        return None
    k = cos_delta / math.tanh(r)
    if k <= 1.0:
        return None
    upper = k + math.sqrt((k - 1.0) * (k + 1.0))
    return 1.0 / upper, upper


def entanglement_window(spec: SqueezeSpec) -> tuple[float, float] | None:
    """(B-, B+) with F(x) < 0 exactly for B- < x < B+; None if empty."""
    return roots_window(math.cos(spec.delta), spec.r)


def in_window(value: float, window: tuple[float, float] | None) -> bool:
    return window is not None and window[0] < value < window[1]


def vvc_decomposition(params: SingleLambdaParams, spec: SqueezeSpec) -> tuple[float, float, float]:
    """(V, V_CS, C) with V - V_CS - C equal to the Duan sum minus its bound."""
    fx, fy, ax, ay = variance_partition(params, spec)
    cx, cy = field_atom_correlation(params, spec)
    return fx + fy + ax + ay, 2.0 + 2.0 / params.n_atoms, 2.0 * cx - 2.0 * cy


def polariton_reconstruction(
    report: SingleLambdaReport, params: SingleLambdaParams, quadrature: str = "x"
) -> float:
    """Polariton variance rebuilt from field, atom and cross terms."""
    theta = mixing_angle(params)
    c, s = math.cos(theta), math.sin(theta)
    n = params.n_atoms
    if quadrature == "x":
        vf, va, corr = report.var_x_field, report.var_x_atom, report.corr_x
    elif quadrature == "y":
        vf, va, corr = report.var_y_field, report.var_y_atom, report.corr_y
    else:
        raise ValueError(f"quadrature must be 'x' or 'y', got {quadrature!r}")
    return c * c * vf + n * s * s * va - 2.0 * math.sqrt(n) * s * c * corr


def single_lambda_report(params: SingleLambdaParams, spec: SqueezeSpec) -> SingleLambdaReport:
    fx, fy, ax, ay = variance_partition(params, spec)
    cx, cy = field_atom_correlation(params, spec)
    v, v_cs, c = vvc_decomposition(params, spec)
    return SingleLambdaReport(
        x=params.x,
        n_atoms=params.n_atoms,
        r=spec.r,
        delta=spec.delta,
        theta=mixing_angle(params),
        var_x_field=fx,
        var_y_field=fy,
        var_x_atom=ax,
        var_y_atom=ay,
        corr_x=cx,
        corr_y=cy,
        f_value=f_function(params, spec),
        ic_normalized=ic_normalized(params, spec),
        v_total=v,
        v_cs=v_cs,
        c_corr=c,
    )
