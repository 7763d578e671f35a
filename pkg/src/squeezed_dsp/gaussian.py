"""Gaussian covariance-matrix engine for squeezed vacua along mode superpositions.

Conventions: quadratures X = a + a^dag and Y = -i(a - a^dag), ordered
(X1, Y1, X2, Y2, ...). The covariance matrix holds symmetrized second moments
V_ij = <{R_i, R_j}>/2 - <R_i><R_j>, so the vacuum is the identity.
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

TWO_PI = 2.0 * math.pi

SYMMETRY_TOL = 1e-12
PHYSICALITY_TOL = 1e-10
UNIT_NORM_TOL = 1e-12
SYMPLECTIC_TOL = 1e-10


@dataclass(frozen=True)
class SqueezeSpec:
    """Squeezing magnitude ``r`` and angle ``delta`` of xi = r exp(i delta).

    ``delta`` is reduced into [0, 2 pi) on construction.
    """

    r: float
    delta: float = 0.0

    def __post_init__(self):
        r = float(self.r)
        delta = float(self.delta)
        if not math.isfinite(r) or r < 0:
            raise ValueError(f"squeezing magnitude must be finite and >= 0, got {self.r!r}")
        if not math.isfinite(delta):
            raise ValueError(f"squeezing angle must be finite, got {self.delta!r}")
        delta = math.fmod(delta, TWO_PI)
        if delta < 0:
            delta += TWO_PI
        if delta >= TWO_PI:  # fmod of a tiny negative number can round up to 2 pi
            delta = 0.0
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "delta", delta)

    @property
    def xi(self) -> complex:
        return self.r * complex(math.cos(self.delta), math.sin(self.delta))


@dataclass(frozen=True)
class ModeDecomposition:
    """Unit-norm coefficients of a collective mode over physical bosonic modes."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(complex(c) for c in self.coeffs)
        if len(coeffs) < 1:
            raise ValueError("a mode decomposition needs at least one coefficient")
        if not all(math.isfinite(c.real) and math.isfinite(c.imag) for c in coeffs):
            raise ValueError("mode coefficients must be finite")
        norm = math.sqrt(math.fsum(abs(c) ** 2 for c in coeffs))
        if abs(norm - 1.0) > UNIT_NORM_TOL:
            raise ValueError(f"mode decomposition must have unit norm, got {norm!r}")
        object.__setattr__(self, "coeffs", coeffs)

    def __len__(self) -> int:
        return len(self.coeffs)

    @property
    def array(self) -> np.ndarray:
        return np.array(self.coeffs, dtype=complex)

    @classmethod
    def normalized(cls, coeffs: Sequence[complex]) -> "ModeDecomposition":
        """Build a decomposition after rescaling ``coeffs`` to unit norm."""
        arr = np.asarray(coeffs, dtype=complex)
        norm = np.linalg.norm(arr)
        if norm == 0:
            raise ValueError("cannot normalize a zero coefficient vector")
        return cls(tuple(arr / norm))


def symplectic_form(n_modes: int) -> np.ndarray:
    """Standard symplectic form for interleaved (X, Y) ordering."""
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class CovarianceState:
    """Zero-mean Gaussian state described by its 2n x 2n quadrature covariance."""

    n_modes: int
    matrix: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = int(self.n_modes)
        if n < 1:
            raise ValueError(f"n_modes must be >= 1, got {self.n_modes!r}")
        m = _frozen(self.matrix)
        if m.shape != (2 * n, 2 * n):
            raise ValueError(f"covariance for {n} modes must be {2 * n}x{2 * n}, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("covariance matrix contains non-finite entries")
        if np.max(np.abs(m - m.T)) > SYMMETRY_TOL:
            raise ValueError("covariance matrix is not symmetric")
        lowest = physicality_margin(m)
        if lowest < -PHYSICALITY_TOL:
            raise ValueError(f"covariance violates V + i Omega >= 0 (min eigenvalue {lowest:.3e})")
        object.__setattr__(self, "n_modes", n)
        object.__setattr__(self, "matrix", m)

    def to_csv(self) -> str:
        """Row-major CSV dump with a ``# covariance n_modes=<n>`` header."""
        buf = io.StringIO()
        buf.write(f"# covariance n_modes={self.n_modes}\n")
        for row in self.matrix:
            buf.write(",".join(f"{v:.17g}" for v in row) + "\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "CovarianceState":
        lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
        header = lines[0]
        if not header.startswith("# covariance n_modes="):
            raise ValueError(f"unexpected covariance header: {header!r}")
        n = int(header.split("=", 1)[1])
        rows = [[float(v) for v in ln.split(",")] for ln in lines[1:]]
        return cls(n, np.array(rows))


def physicality_margin(matrix: np.ndarray) -> float:
    """Smallest eigenvalue of V + i Omega (non-negative for physical states)."""
    n = matrix.shape[0] // 2
    return float(np.linalg.eigvalsh(matrix + 1j * symplectic_form(n))[0])


@dataclass(frozen=True)
class QuadratureReport:
    """Per-mode quadrature variances and symmetrized cross-correlations.

    ``corr_xx[i][j]`` is the symmetrized covariance of X_i and X_j; its
    diagonal repeats ``var_x``. Likewise for ``corr_yy``.
    """

    var_x: np.ndarray
    var_y: np.ndarray
    corr_xx: np.ndarray
    corr_yy: np.ndarray

    def __post_init__(self):
        for name in ("var_x", "var_y", "corr_xx", "corr_yy"):
            object.__setattr__(self, name, _frozen(getattr(self, name)))

    @property
    def n_modes(self) -> int:
        return len(self.var_x)

    def uncertainty_products(self) -> np.ndarray:
        return self.var_x * self.var_y

    def as_dict(self) -> dict:
        return {
            "var_x": self.var_x.tolist(),
            "var_y": self.var_y.tolist(),
            "corr_xx": self.corr_xx.tolist(),
            "corr_yy": self.corr_yy.tolist(),
        }


def vacuum_state(n_modes: int) -> CovarianceState:
    if int(n_modes) != n_modes or n_modes < 1:
        raise ValueError(f"n_modes must be a positive integer, got {n_modes!r}")
    return CovarianceState(int(n_modes), np.eye(2 * int(n_modes)))


def single_mode_squeeze_symplectic(spec: SqueezeSpec) -> np.ndarray:
    """Heisenberg-picture map of S(xi) on (X, Y) of one mode.

    Gives variances cosh 2r -/+ sinh 2r cos(delta) on the vacuum.
    """
    ch, sh = math.cosh(spec.r), math.sinh(spec.r)
    cd, sd = math.cos(spec.delta), math.sin(spec.delta)
    return np.array([[ch - sh * cd, -sh * sd], [-sh * sd, ch + sh * cd]])


def complete_unitary(coeffs: np.ndarray) -> np.ndarray:
    """Unitary whose first row is ``coeffs``.

    Remaining rows come from Gram-Schmidt over the standard basis vectors in
    index order, so the result is deterministic.
    """
    n = len(coeffs)
    rows = [np.asarray(coeffs, dtype=complex)]
    for k in range(n):
        if len(rows) == n:
            break
        v = np.zeros(n, dtype=complex)
        v[k] = 1.0
        # two passes keep the rows orthogonal to machine precision
        for _ in range(2):
            for u in rows:
                v = v - np.vdot(u, v) * u
        norm = np.linalg.norm(v)
        if norm > 1e-8:
            rows.append(v / norm)
    return np.array(rows)


def passive_symplectic(unitary: np.ndarray) -> np.ndarray:
    """Real orthogonal symplectic matrix of the mode transform b = U a."""
    n = unitary.shape[0]
    re, im = unitary.real, unitary.imag
    p = np.empty((2 * n, 2 * n))
    p[0::2, 0::2] = re
    p[0::2, 1::2] = -im
    p[1::2, 0::2] = im
    p[1::2, 1::2] = re
    return p


def squeeze_symplectic(direction: ModeDecomposition, spec: SqueezeSpec) -> np.ndarray:
    """Symplectic matrix squeezing the collective mode ``direction``.

    The complement of ``direction`` is left untouched.
    """
    n = len(direction)
    p = passive_symplectic(complete_unitary(direction.array))
    local = np.eye(2 * n)
    local[:2, :2] = single_mode_squeeze_symplectic(spec)
    return p.T @ local @ p


def squeeze_along_mode(
    state: CovarianceState, direction: ModeDecomposition, spec: SqueezeSpec
) -> CovarianceState:
    if not isinstance(direction, ModeDecomposition):
        direction = ModeDecomposition(tuple(direction))
    if len(direction) != state.n_modes:
        raise ValueError(
            f"direction has {len(direction)} coefficients but the state has {state.n_modes} modes"
        )
    if spec.r == 0:
        return state
    s = squeeze_symplectic(direction, spec)
    out = s @ state.matrix @ s.T
    return CovarianceState(state.n_modes, 0.5 * (out + out.T))


def quadrature_report(state: CovarianceState) -> QuadratureReport:
    v = state.matrix
    return QuadratureReport(
        var_x=np.diag(v)[0::2],
        var_y=np.diag(v)[1::2],
        corr_xx=v[0::2, 0::2],
        corr_yy=v[1::2, 1::2],
    )


def _check_pair(n_modes: int, i: int, j: int, lam: float) -> None:
    for idx in (i, j):
        if int(idx) != idx or not 0 <= idx < n_modes:
            raise ValueError(f"mode index {idx!r} out of range for {n_modes} modes")
    if i == j:
        raise ValueError("the inseparability test needs two distinct modes")
    if not lam > 0 or not math.isfinite(lam):
        raise ValueError(f"scale lambda must be positive and finite, got {lam!r}")


def duan_from_report(report: QuadratureReport, i: int, j: int, lam: float = 1.0) -> float:
    """Var(X_i - lam X_j) + Var(Y_i + lam Y_j) from second moments."""
    _check_pair(report.n_modes, i, j, lam)
    vx = report.var_x[i] + lam**2 * report.var_x[j] - 2.0 * lam * report.corr_xx[i, j]
    vy = report.var_y[i] + lam**2 * report.var_y[j] + 2.0 * lam * report.corr_yy[i, j]
    return float(vx + vy)


def duan_scaled(state: CovarianceState, i: int, j: int, lam: float = 1.0) -> float:
    """Duan-type sum Var(X_i - lam X_j) + Var(Y_i + lam Y_j).

    Separable states satisfy value >= 2 + 2 lam**2.
    """
    _check_pair(state.n_modes, i, j, lam)
    w = np.zeros(2 * state.n_modes)
    w[2 * i], w[2 * j] = 1.0, -lam
    u = np.zeros(2 * state.n_modes)
    u[2 * i + 1], u[2 * j + 1] = 1.0, lam
    return float(w @ state.matrix @ w + u @ state.matrix @ u)


def duan_bound(lam: float = 1.0) -> float:
    return 2.0 + 2.0 * lam**2


def check_symplectic(s: np.ndarray, tol: float = SYMPLECTIC_TOL) -> bool:
    s = np.asarray(s, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {s.shape}")
    if s.shape[0] % 2:
        raise ValueError(f"symplectic matrices have even dimension, got {s.shape[0]}")
    omega = symplectic_form(s.shape[0] // 2)
    return bool(np.max(np.abs(s @ omega @ s.T - omega)) <= tol)
