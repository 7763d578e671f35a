"""Brute-force squeezed vacua in a truncated multimode Fock space.

Basis states are ordered lexicographically by occupation with mode 0 slowest,
i.e. index = sum_k n_k d**(n_modes - 1 - k).

The squeeze operator is exponentiated on the vacuum in a padded working space
(cutoff larger than the requested one) and the result is projected back onto
occupations < d. The discarded probability is recorded as the truncation tail.
Quadrature moments are exact moments of the projected, renormalized ket.
"""

from __future__ import annotations

import functools
import io
from dataclasses import dataclass, field

import numpy as np
import scipy.sparse as sp

from .gaussian import ModeDecomposition, QuadratureReport, SqueezeSpec
from .krylov import expm_antihermitian_action

DEFAULT_MAX_AMPLITUDES = 10**6
DEFAULT_MAX_TAIL = 1e-6


class TruncationError(RuntimeError):
    """The cutoff is too small for the requested squeezing."""

    def __init__(self, message: str, tail: float):
        super().__init__(message)
        self.tail = tail


def default_cutoff(n_modes: int) -> int:
    return 40 if n_modes <= 2 else 20


def working_cutoff(cutoff: int) -> int:
    """Padded cutoff used while exponentiating."""
    return cutoff + max(8, cutoff // 2)


@dataclass(frozen=True)
class FockSpace:
    n_modes: int
    cutoff: int
    max_amplitudes: int = DEFAULT_MAX_AMPLITUDES

    def __post_init__(self):
        if int(self.n_modes) != self.n_modes or self.n_modes < 1:
            raise ValueError(f"n_modes must be a positive integer, got {self.n_modes!r}")
        if int(self.cutoff) != self.cutoff or self.cutoff < 2:
            raise ValueError(f"cutoff must be an integer >= 2, got {self.cutoff!r}")
        if self.dimension > self.max_amplitudes:
            raise ValueError(
                f"{self.cutoff}**{self.n_modes} = {self.dimension} amplitudes exceeds "
                f"the cap of {self.max_amplitudes}"
            )

    @property
    def dimension(self) -> int:
        return int(self.cutoff) ** int(self.n_modes)

    def occupations(self) -> np.ndarray:
        """(dimension, n_modes) integer array of occupations per basis index."""
        grids = np.indices((self.cutoff,) * self.n_modes).reshape(self.n_modes, -1)
        return grids.T


@dataclass(frozen=True)
class KetVector:
    amplitudes: np.ndarray = field(repr=False)
    tail: float = 0.0
    norm_before_renormalization: float = 1.0

    def __post_init__(self):
        a = np.array(self.amplitudes, dtype=complex)
        a.setflags(write=False)
        object.__setattr__(self, "amplitudes", a)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("index,re,im\n")
        for k, c in enumerate(self.amplitudes):
            buf.write(f"{k},{c.real:.17g},{c.imag:.17g}\n")
        return buf.getvalue()


@functools.lru_cache(maxsize=32)
def _ladder_ops(n_modes: int, cutoff: int) -> tuple:
    a = sp.diags(np.sqrt(np.arange(1, cutoff)), 1, format="csr")
    eye = sp.identity(cutoff, format="csr")
    ops = []
    for k in range(n_modes):
        m = sp.identity(1, format="csr")
        for j in range(n_modes):
            m = sp.kron(m, a if j == k else eye, format="csr")
        ops.append(m)
    return tuple(ops)


@functools.lru_cache(maxsize=32)
def _pair_products(n_modes: int, cutoff: int) -> dict:
    ops = _ladder_ops(n_modes, cutoff)
    return {(i, j): (ops[i] @ ops[j]).tocsr() for i in range(n_modes) for j in range(i, n_modes)}


def _check_direction(space: FockSpace, direction) -> ModeDecomposition:
    if not isinstance(direction, ModeDecomposition):
        direction = ModeDecomposition(tuple(direction))
    if len(direction) != space.n_modes:
        raise ValueError(
            f"direction has {len(direction)} coefficients but the space has {space.n_modes} modes"
        )
    return direction


def mode_operator(space: FockSpace, direction: ModeDecomposition) -> sp.csr_matrix:
    """Annihilator of the collective mode sum_i c_i a_i on the truncated space."""
    direction = _check_direction(space, direction)
    ops = _ladder_ops(space.n_modes, space.cutoff)
    out = sp.csr_matrix((space.dimension, space.dimension), dtype=complex)
    for c, a in zip(direction.coeffs, ops):
        if c != 0:
            out = out + c * a
    return out.tocsr()


def commutator_defect(space: FockSpace, direction: ModeDecomposition) -> float:
    """max |[a, a^dag] - 1| over basis states with no mode at the top level."""
    a = mode_operator(space, direction)
    comm = (a @ a.conj().T - a.conj().T @ a).toarray()
    inside = np.all(space.occupations() < space.cutoff - 1, axis=1)
    block = comm[np.ix_(inside, inside)]
    return float(np.max(np.abs(block - np.eye(block.shape[0]))))


def _squeeze_generator(n_modes: int, cutoff: int, coeffs, xi: complex) -> sp.csr_matrix:
    """(xi*/2) a_psi**2 - (xi/2) a_psi^dag**2 assembled from cached pair products."""
    pairs = _pair_products(n_modes, cutoff)
    dim = cutoff**n_modes
    a2 = sp.csr_matrix((dim, dim), dtype=complex)
    for (i, j), prod in pairs.items():
        w = coeffs[i] * coeffs[j] * (1 if i == j else 2)
        if w != 0:
            a2 = a2 + w * prod
    a2 = a2.tocsr()
    return (0.5 * np.conj(xi)) * a2 - (0.5 * xi) * a2.conj().T


def squeezed_vacuum_ket(
    space: FockSpace,
    direction: ModeDecomposition,
    spec: SqueezeSpec,
    max_tail: float = DEFAULT_MAX_TAIL,
) -> KetVector:
    """exp((xi*/2) a_psi**2 - (xi/2) a_psi^dag**2)|0>, projected to the space.

    Raises:
        TruncationError: the probability beyond the cutoff exceeds ``max_tail``.
    """
    direction = _check_direction(space, direction)
    n, d = space.n_modes, space.cutoff
    if spec.r == 0:
        amps = np.zeros(space.dimension, dtype=complex)
        amps[0] = 1.0
        return KetVector(amps)

    dw = working_cutoff(d)
    if dw**n > space.max_amplitudes:
        raise ValueError(
            f"padded working space {dw}**{n} exceeds the cap of {space.max_amplitudes} amplitudes"
        )
    gen = _squeeze_generator(n, dw, direction.coeffs, spec.xi)
    v0 = np.zeros(dw**n, dtype=complex)
    v0[0] = 1.0
    full = expm_antihermitian_action(gen, v0)

    kept = full.reshape((dw,) * n)[(slice(0, d),) * n].ravel()
    kept_norm = float(np.linalg.norm(kept))
    tail = max(0.0, 1.0 - kept_norm**2 / float(np.vdot(full, full).real))
    if tail > max_tail:
        raise TruncationError(
            f"cutoff {d} loses probability {tail:.3e} > {max_tail:.1e} at r={spec.r}", tail
        )
    return KetVector(kept / kept_norm, tail=tail, norm_before_renormalization=kept_norm)


def truncation_tail(ket: KetVector, space: FockSpace) -> float:
    """Probability outside the reliable region of the truncated space.

    The larger of the mass discarded at construction and the population of
    basis states with any mode at occupation d - 1.
    """
    probs = np.abs(np.asarray(ket.amplitudes)) ** 2
    top = np.any(space.occupations() == space.cutoff - 1, axis=1)
    return float(max(ket.tail, probs[top].sum()))


def _embedded(ket: KetVector, space: FockSpace) -> np.ndarray:
    """Ket copied into cutoff d + 1 so that a^dag acts without truncation."""
    n, d = space.n_modes, space.cutoff
    out = np.zeros((d + 1,) * n, dtype=complex)
    out[(slice(0, d),) * n] = np.asarray(ket.amplitudes).reshape((d,) * n)
    return out.ravel()


def covariance_matrix(ket: KetVector, space: FockSpace) -> np.ndarray:
    """Full 2n x 2n symmetrized quadrature covariance of the ket."""
    if len(ket.amplitudes) != space.dimension:
        raise ValueError(
            f"ket has {len(ket.amplitudes)} amplitudes, space expects {space.dimension}"
        )
    norm = ket.norm
    if abs(norm - 1.0) > 1e-10:
        raise ValueError(f"ket is not normalized (norm {norm!r})")
    psi = _embedded(ket, space)
    ops = _ladder_ops(space.n_modes, space.cutoff + 1)
    vecs = []
    for a in ops:
        a_psi = a @ psi
        ad_psi = a.conj().T @ psi
        vecs.append(a_psi + ad_psi)  # X psi
        vecs.append(-1j * (a_psi - ad_psi))  # Y psi
    vecs = np.array(vecs)
    means = (vecs @ psi.conj()).real
    second = (vecs.conj() @ vecs.T).real
    cov = second - np.outer(means, means)
    return 0.5 * (cov + cov.T)


def quadrature_means(ket: KetVector, space: FockSpace) -> np.ndarray:
    psi = _embedded(ket, space)
    out = []
    for a in _ladder_ops(space.n_modes, space.cutoff + 1):
        ev = np.vdot(psi, a @ psi)
        out.extend([2.0 * ev.real, 2.0 * ev.imag])
    return np.array(out)


def quadrature_stats(ket: KetVector, space: FockSpace) -> QuadratureReport:
    v = covariance_matrix(ket, space)
    return QuadratureReport(
        var_x=np.diag(v)[0::2],
        var_y=np.diag(v)[1::2],
        corr_xx=v[0::2, 0::2],
        corr_yy=v[1::2, 1::2],
    )
