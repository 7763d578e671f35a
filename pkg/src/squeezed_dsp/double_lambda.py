"""Closed forms for a squeezed dark-state polariton in a double-Lambda medium.

Two probe fields share one collective atomic polarization. The polariton is
cos(theta)cos(phi) E1 + cos(theta)sin(phi) E2 - sin(theta) b, with control
ratios y1 = Omega_1/g_1, y2 = Omega_2/g_2 and D = y1**2 + y2**2 + N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .gaussian import ModeDecomposition, SqueezeSpec
from .single_lambda import in_window, input_variances, roots_window, squeezing_numerator

CSV_COLUMNS = (
    "y1", "y2", "n_atoms", "r", "delta",
    "var_x_1", "var_x_2", "var_x_atom", "corr_x_12", "corr_x_1s", "corr_x_2s",
    "g1", "g2", "h", "ic_fa1", "ic_fa2", "ic_ff",
    "var_y_1", "var_y_2", "var_y_atom", "corr_y_12", "corr_y_1s", "corr_y_2s",
)  # fmt: skip


@dataclass(frozen=True)
class DoubleLambdaParams:
    y1: float
    y2: float
    n_atoms: float

    def __post_init__(self):
        y1, y2, n = float(self.y1), float(self.y2), float(self.n_atoms)
        for name, val in (("y1", y1), ("y2", y2)):
            if not math.isfinite(val) or val < 0:
                raise ValueError(f"control ratio {name} must be finite and >= 0, got {val!r}")
        if not math.isfinite(n) or n < 1:
            raise ValueError(f"n_atoms must be finite and >= 1, got {self.n_atoms!r}")
        object.__setattr__(self, "y1", y1)
        object.__setattr__(self, "y2", y2)
        object.__setattr__(self, "n_atoms", n)

    @property
    def denominator(self) -> float:
        return self.y1**2 + self.y2**2 + self.n_atoms


@dataclass(frozen=True)
class DoubleLambdaReport:
    y1: float
    y2: float
    n_atoms: float
    r: float
    delta: float
    theta: float
    phi: float
    var_x_1: float
    var_x_2: float
    var_x_atom: float
    var_y_1: float
    var_y_2: float
    var_y_atom: float
    corr_x_12: float
    corr_x_1s: float
    corr_x_2s: float
    corr_y_12: float
    corr_y_1s: float
    corr_y_2s: float
    g1: float
    g2: float
    h: float
    ic_fa1: float
    ic_fa2: float
    ic_ff: float

    @property
    def ic_field_atom(self) -> tuple[float, float]:
        return self.ic_fa1, self.ic_fa2

    @property
    def ic_field_field(self) -> float:
        return self.ic_ff

    def as_dict(self) -> dict:
        return dict(self.__dict__)

    def csv_row(self) -> list:
        d = self.as_dict()
        return [d[k] for k in CSV_COLUMNS]


def mixing_theta(params: DoubleLambdaParams) -> float:
    """Field/atom mixing angle; pi/2 when both control fields are off."""
    return math.atan2(math.sqrt(params.n_atoms), math.hypot(params.y1, params.y2))


def mixing_angles(params: DoubleLambdaParams) -> tuple[float, float]:
    """(theta, phi); phi is undefined with both control fields off."""
    if params.y1 == 0 and params.y2 == 0:
        raise ValueError("phi is undefined for y1 = y2 = 0")
    return mixing_theta(params), math.atan2(params.y2, params.y1)


def polariton_decomposition(params: DoubleLambdaParams) -> ModeDecomposition:
    """Coefficients over (field 1, field 2, b) with b = sqrt(N) sigma."""
    theta, phi = mixing_angles(params)
    ct = math.cos(theta)
    return ModeDecomposition((ct * math.cos(phi), ct * math.sin(phi), -math.sin(theta)))


def _partition(params: DoubleLambdaParams, v_in: float) -> tuple[float, float, float]:
    y1s, y2s, n = params.y1**2, params.y2**2, params.n_atoms
    den = params.denominator
    return (
        (y1s * v_in + y2s + n) / den,
        (y1s + y2s * v_in + n) / den,
        (y1s + y2s + n * v_in) / (n * den),
    )


def variance_partition(params: DoubleLambdaParams, spec: SqueezeSpec) -> dict:
    vx, vy = input_variances(spec)
    x1, x2, xa = _partition(params, vx)
    w1, w2, wa = _partition(params, vy)
    return {
        "var_x_1": x1, "var_x_2": x2, "var_x_atom": xa,
        "var_y_1": w1, "var_y_2": w2, "var_y_atom": wa,
    }  # fmt: skip


def correlations(params: DoubleLambdaParams, spec: SqueezeSpec) -> dict:
    vx, vy = input_variances(spec)
    den = params.denominator
    y1, y2 = params.y1, params.y2
    out = {}
    for q, v_in in (("x", vx), ("y", vy)):
        out[f"corr_{q}_12"] = y1 * y2 * (v_in - 1.0) / den
        out[f"corr_{q}_1s"] = y1 * (1.0 - v_in) / den
        out[f"corr_{q}_2s"] = y2 * (1.0 - v_in) / den
    return out


def g_function(y: float, spec: SqueezeSpec) -> float:
    """Field-atom numerator; same form as the single-Lambda F."""
    return squeezing_numerator(y, spec)


def h_function(params: DoubleLambdaParams, spec: SqueezeSpec) -> float:
    """Field-field numerator (y1**2 + y2**2) sinh**2 r + 2 y1 y2 sinh r cosh r cos(delta)."""
    sh, ch = math.sinh(spec.r), math.cosh(spec.r)
    y1, y2 = params.y1, params.y2
    return (y1 * y1 + y2 * y2) * sh * sh + 2.0 * y1 * y2 * sh * ch * math.cos(spec.delta)


def ic_field_atom(params: DoubleLambdaParams, spec: SqueezeSpec, i: int) -> float:
    """Normalized Duan value for (field i, atoms); entangled iff < 1."""
    if i not in (1, 2):
        raise ValueError(f"field index must be 1 or 2, got {i!r}")
    y = params.y1 if i == 1 else params.y2
    n = params.n_atoms
    return 1.0 + (2.0 / (1.0 + 1.0 / n)) * g_function(y, spec) / params.denominator


def ic_field_field(params: DoubleLambdaParams, spec: SqueezeSpec) -> float:
    """Normalized Duan value for (field 1, field 2); bound 4 on the raw sum."""
    return 1.0 + h_function(params, spec) / params.denominator


def field_field_wedge(spec: SqueezeSpec) -> tuple[float, float] | None:
    """Slopes (1/A+, 1/A-) bounding H < 0 in y2/y1; None if empty.

    A+ A- = 1, so the slopes are also (A-, A+).
    """
    roots = roots_window(-math.cos(spec.delta), spec.r)
    if roots is None:
        return None
    a_minus, a_plus = roots
    return 1.0 / a_plus, 1.0 / a_minus


def field_atom_window(spec: SqueezeSpec) -> tuple[float, float] | None:
    """(B-, B+) with G(y) < 0 exactly for B- < y < B+; None if empty."""
    return roots_window(math.cos(spec.delta), spec.r)


def in_wedge(y1: float, y2: float, wedge: tuple[float, float] | None) -> bool:
    """Strictly between the two boundary lines through the origin."""
    return wedge is not None and wedge[0] * y1 < y2 < wedge[1] * y1


def tripartite_coexistence(params: DoubleLambdaParams, spec: SqueezeSpec) -> dict:
    """Signs of G1, G2 and H; (g_i_neg and h_neg) never holds."""
    return {
        "g1_neg": g_function(params.y1, spec) < 0,
        "g2_neg": g_function(params.y2, spec) < 0,
        "h_neg": h_function(params, spec) < 0,
    }


def polariton_reconstruction(
    report: DoubleLambdaReport, params: DoubleLambdaParams, quadrature: str = "x"
) -> float:
    """Polariton variance rebuilt from the partition and all pair correlations.

    The field-field cross term carries cos(theta)**2, which is what the
    expansion of the polariton quadrature produces.
    """
    if quadrature not in ("x", "y"):
        raise ValueError(f"quadrature must be 'x' or 'y', got {quadrature!r}")
    d = report.as_dict()
    q = quadrature
    theta = mixing_theta(params)
    phi = math.atan2(params.y2, params.y1) if (params.y1 or params.y2) else 0.0
    ct, st = math.cos(theta), math.sin(theta)
    cp, sp = math.cos(phi), math.sin(phi)
    n = params.n_atoms
    return (
        n * st * st * d[f"var_{q}_atom"]
        + ct * ct * cp * cp * d[f"var_{q}_1"]
        + ct * ct * sp * sp * d[f"var_{q}_2"]
        + 2.0 * ct * ct * cp * sp * d[f"corr_{q}_12"]
        - 2.0 * math.sqrt(n) * st * ct * (cp * d[f"corr_{q}_1s"] + sp * d[f"corr_{q}_2s"])
    )


def double_lambda_report(params: DoubleLambdaParams, spec: SqueezeSpec) -> DoubleLambdaReport:
    theta = mixing_theta(params)
    phi = math.atan2(params.y2, params.y1) if (params.y1 or params.y2) else 0.0
    return DoubleLambdaReport(
        y1=params.y1,
        y2=params.y2,
        n_atoms=params.n_atoms,
        r=spec.r,
        delta=spec.delta,
        theta=theta,
        phi=phi,
        **variance_partition(params, spec),
        **correlations(params, spec),
        g1=g_function(params.y1, spec),
        g2=g_function(params.y2, spec),
        h=h_function(params, spec),
        ic_fa1=ic_field_atom(params, spec, 1),
        ic_fa2=ic_field_atom(params, spec, 2),
        ic_ff=ic_field_field(params, spec),
    )


def classify_field_atom(params: DoubleLambdaParams, spec: SqueezeSpec, i: int) -> bool:
    """Analytic field-atom entanglement test from the window alone."""
    y = params.y1 if i == 1 else params.y2
    return in_window(y, field_atom_window(spec))
