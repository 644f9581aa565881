"""Small dense linear algebra helpers for 2x2 payloads and full unitaries.

Matrices are plain ``numpy`` complex arrays. A 2x2 array is a gate payload,
a ``2**n x 2**n`` array is the operator of an n-qubit circuit.
"""

from __future__ import annotations

import numpy as np
import scipy.linalg

UNITARY_TOL = 1e-10
EQUIV_TOL = 1e-8

I2 = np.eye(2, dtype=complex)
X = np.array([[0, 1], [1, 0]], dtype=complex)
Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
Z = np.array([[1, 0], [0, -1]], dtype=complex)
H = np.array([[1, 1], [1, -1]], dtype=complex) / np.sqrt(2)

for _m in (I2, X, Y, Z, H):
    _m.setflags(write=False)


class NotUnitaryError(ValueError):
    pass


def mat2(a00, a01, a10, a11) -> np.ndarray:
    return np.array([[a00, a01], [a10, a11]], dtype=complex)


def diag2(a, b) -> np.ndarray:
    return np.array([[a, 0], [0, b]], dtype=complex)


def phase(theta: float) -> np.ndarray:
    """``diag(1, e^{i theta})``."""
    return diag2(1.0, np.exp(1j * theta))


def rz(theta: float) -> np.ndarray:
    return diag2(np.exp(-0.5j * theta), np.exp(0.5j * theta))


def ry(theta: float) -> np.ndarray:
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    return mat2(c, -s, s, c)


def mul2(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return a @ b


def dagger2(a: np.ndarray) -> np.ndarray:
    return a.conj().T


def is_diagonal(a: np.ndarray, tol: float = 1e-9) -> bool:
    return abs(a[0, 1]) <= tol and abs(a[1, 0]) <= tol


def is_antidiagonal(a: np.ndarray, tol: float = 1e-9) -> bool:
    return abs(a[0, 0]) <= tol and abs(a[1, 1]) <= tol


def is_scalar(a: np.ndarray, tol: float = 1e-9) -> bool:
    """True if ``a`` is a multiple of the identity."""
    return is_diagonal(a, tol) and abs(a[0, 0] - a[1, 1]) <= tol


def is_identity(a: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return bool(np.max(np.abs(a - np.eye(a.shape[0]))) <= tol)


def is_hermitian(a: np.ndarray, tol: float = 1e-9) -> bool:
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def close(a: np.ndarray, b: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return bool(np.max(np.abs(a - b)) <= tol)


def unitarity_error(m: np.ndarray) -> float:
    return float(np.max(np.abs(m @ m.conj().T - np.eye(m.shape[0]))))


def is_unitary(m: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    return m.ndim == 2 and m.shape[0] == m.shape[1] and unitarity_error(m) <= tol


def check_unitary(m: np.ndarray, tol: float = UNITARY_TOL) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise NotUnitaryError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise NotUnitaryError("matrix has non-finite entries")
    err = unitarity_error(m)
    if err > tol:
        raise NotUnitaryError(f"matrix is not unitary (|M M^dag - I| = {err:.3e} > {tol:g})")
    return m


def num_qubits(m: np.ndarray) -> int:
    dim = m.shape[0]
    n = dim.bit_length() - 1
    if dim < 2 or 1 << n != dim or m.shape != (dim, dim):
        raise ValueError(f"dimension {m.shape} is not 2^n x 2^n")
    return n


def global_phase_alignment(u: np.ndarray, v: np.ndarray) -> tuple[float, complex]:
    """Return ``(max |u - c v|, c)`` for the unit-modulus ``c`` read off v's largest entry."""
    u = np.asarray(u)
    v = np.asarray(v)
    if u.shape != v.shape:
        raise ValueError(f"dimension mismatch: {u.shape} vs {v.shape}")
    idx = np.unravel_index(np.argmax(np.abs(v)), v.shape)
    if abs(v[idx]) < 1e-6:
        c = 1.0 + 0j
    else:
        ratio = u[idx] / v[idx]
        c = ratio / abs(ratio) if abs(ratio) > 0 else 1.0 + 0j
    return float(np.max(np.abs(u - c * v))), complex(c)


def equal_up_to_global_phase(u: np.ndarray, v: np.ndarray, tol: float = EQUIV_TOL) -> bool:
    return global_phase_alignment(u, v)[0] <= tol


def _eig_unitary2(u: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal eigenbasis of a 2x2 unitary (normal) matrix."""
    if is_diagonal(u, 1e-14):
        return np.array([u[0, 0], u[1, 1]]), np.eye(2, dtype=complex)
    # complex Schur form of a normal matrix is diagonal with unitary Z
    t, vecs = scipy.linalg.schur(u, output="complex")
    return np.diag(t).copy(), vecs


def matrix_power2(u: np.ndarray, exponent: float) -> np.ndarray:
    """Principal power of a 2x2 unitary, eigenphases taken in (-pi, pi]."""
    evals, vecs = _eig_unitary2(u)
    ang = np.angle(evals)
    ang = np.where(ang <= -np.pi + 1e-12, np.pi, ang)
    return (vecs * np.exp(1j * ang * exponent)) @ vecs.conj().T


def matrix_sqrt2(u: np.ndarray) -> np.ndarray:
    return matrix_power2(u, 0.5)


def random_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed unitary: QR of a complex Ginibre matrix, R's diagonal made positive."""
    z = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def zyz_angles(u: np.ndarray) -> tuple[float, float, float, float]:
    """Write ``u = e^{i delta} Rz(gamma) Ry(theta) Rz(lam)``; returns ``(delta, gamma, theta, lam)``."""
    det = u[0, 0] * u[1, 1] - u[0, 1] * u[1, 0]
    delta = float(np.angle(det)) / 2
    w = u * np.exp(-1j * delta)
    theta = 2 * float(np.arctan2(abs(w[1, 0]), abs(w[0, 0])))
    plus = 2 * float(np.angle(w[1, 1])) if abs(w[1, 1]) > 1e-12 else 0.0
    minus = 2 * float(np.angle(w[1, 0])) if abs(w[1, 0]) > 1e-12 else 0.0
    gamma = (plus + minus) / 2
    lam = (plus - minus) / 2
    return delta, gamma, theta, lam
