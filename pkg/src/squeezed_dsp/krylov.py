"""Krylov (Lanczos) action of exp(G) on a vector for anti-Hermitian sparse G."""

from __future__ import annotations

import numpy as np
import scipy.linalg


def _exp_tridiag_e1(alpha: np.ndarray, beta: np.ndarray, h: float) -> np.ndarray:
    """exp(-i h T) e_1 for the real symmetric tridiagonal T(alpha, beta)."""
    if len(alpha) == 1:
        return np.array([np.exp(-1j * h * alpha[0])])
    w, q = scipy.linalg.eigh_tridiagonal(alpha, beta)
    return q @ (np.exp(-1j * h * w) * q[0])


def expm_antihermitian_action(
    g, v: np.ndarray, t: float = 1.0, tol: float = 1e-12, max_basis: int = 60
) -> np.ndarray:
    """Return exp(t G) v for anti-Hermitian G via restarted Lanczos on H = iG.

    A step of length h is accepted once the a-posteriori estimate
    beta_m |[exp(-i h T_m) e_1]_m| drops below ``tol``. If the basis reaches
    ``max_basis`` first, h is halved until the estimate passes and the
    remaining time is covered by further restarts. Only the three-term
    recurrence is used; loss of orthogonality does not spoil the action.
    The estimate cannot go below roughly |H| * eps, so ``tol`` much under
    1e-13 will not converge.
    """
    v = np.array(v, dtype=complex)
    if t == 0 or not np.any(v):
        return v

    remaining = float(t)
    q = np.empty((max_basis, v.size), dtype=complex)
    while remaining > 0:
        beta0 = np.linalg.norm(v)
        q[0] = v / beta0
        alpha, beta = [], []
        h = remaining
        m = 0
        while True:
            w = 1j * (g @ q[m])
            a = np.vdot(q[m], w).real
            w -= a * q[m]
            if m > 0:
                w -= beta[-1] * q[m - 1]
            alpha.append(a)
            m += 1
            b = np.linalg.norm(w)
            coeffs = _exp_tridiag_e1(np.array(alpha), np.array(beta), h)
            if b <= 1e-13 * max(1.0, abs(a)):
                break  # invariant subspace: exact
            if b * abs(coeffs[-1]) <= tol:
                break
            if m >= max_basis:
                while b * abs(coeffs[-1]) > tol:
                    h *= 0.5
                    if h < 1e-10 * t:
                        raise RuntimeError("Lanczos step size underflow; tolerance unreachable")
                    coeffs = _exp_tridiag_e1(np.array(alpha), np.array(beta), h)
                break
            beta.append(b)
            q[m] = w / b
        v = beta0 * (q[:m].T @ coeffs)
        remaining -= h
    return v
