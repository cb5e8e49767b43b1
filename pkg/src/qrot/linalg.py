"""Dense complex linear algebra on small matrices.

Everything works on plain numpy arrays (complex128, row-major). All matrices
in this package are dense and small (2x2 up to a few thousand rows), so the
Hermitian eigensolver is a self-contained cyclic Jacobi iteration; numpy is
used for storage and elementwise arithmetic only.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, NumericError, ShapeError

PAULI_I = np.eye(2, dtype=complex)
PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (PAULI_I, PAULI_X, PAULI_Y, PAULI_Z)


def _as_matrix(m, name="matrix") -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-dimensional, got shape {m.shape}")
    return m


def matmul(a, b) -> np.ndarray:
    """Matrix product with an explicit inner-dimension check."""
    a = _as_matrix(a, "left operand")
    b = _as_matrix(b, "right operand")
    if a.shape[1] != b.shape[0]:
        raise ShapeError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def trace(m) -> complex:
    """Sum of the diagonal of a square matrix."""
    m = _as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"trace requires a square matrix, got {m.shape}")
    return complex(np.trace(m))


def kron(a, b) -> np.ndarray:
    """Kronecker product."""
    return np.kron(_as_matrix(a, "left operand"), _as_matrix(b, "right operand"))


def dagger(m) -> np.ndarray:
    """Conjugate transpose."""
    return np.asarray(m).conj().T


def max_abs(m) -> float:
    m = np.asarray(m)
    return float(np.max(np.abs(m))) if m.size else 0.0


def is_unitary(m, tol: float = 1e-10) -> bool:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    return max_abs(dagger(m) @ m - np.eye(m.shape[0])) <= tol


def align_global_phase(reference, m) -> np.ndarray:
    """Multiply ``m`` by the unit phase that best matches ``reference``.

    Comparing unitaries that may differ by an unobservable overall phase is
    only meaningful after this alignment.
    """
    reference = _as_matrix(reference, "reference")
    m = _as_matrix(m)
    z = complex(np.sum(np.conj(reference) * m))
    if abs(z) < 1e-12:
        weights = np.abs(reference) * np.abs(m)
        j = int(np.argmax(weights))
        if weights.flat[j] < 1e-12:
            return m
        z = complex(np.conj(reference.flat[j]) * m.flat[j])
    return m * (np.conj(z) / abs(z))


def eig_hermitian(m, *, hermiticity_tol: float = 1e-8,
                  max_sweeps: int = 100, off_tol: float = 1e-12):
    """Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.

    Returns ``(values, vectors)`` with eigenvalues sorted descending and the
    eigenvectors as columns of a unitary matrix, so that
    ``m == vectors @ diag(values) @ vectors.conj().T``.

    Each step phase-rotates the (p, q) pivot into a real symmetric 2x2
    subproblem and annihilates the off-diagonal entry with a classical
    Jacobi rotation. Convergence is quadratic; a handful of sweeps suffices
    for the dimensions used here. Raises NumericError if the off-diagonal
    mass has not dropped below ``off_tol`` (relative to the largest input
    entry) after ``max_sweeps`` sweeps.
    """
    a = _as_matrix(m)
    if a.shape[0] != a.shape[1]:
        raise ShapeError(f"eigendecomposition requires a square matrix, got {a.shape}")
    if max_abs(a - dagger(a)) > hermiticity_tol:
        raise DomainError("matrix is not Hermitian within tolerance")
    a = (a + dagger(a)) / 2.0
    d = a.shape[0]
    v = np.eye(d, dtype=complex)
    if d == 1:
        return np.array([a[0, 0].real]), v

    threshold = off_tol * max(1.0, max_abs(a))
    converged = False
    for _ in range(max_sweeps):
        if max_abs(np.triu(a, 1)) <= threshold:
            converged = True
            break
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                r = abs(apq)
                if r <= threshold:
                    continue
                phase = apq / r
                tau = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if tau == 0.0:
                    t = 1.0
                else:
                    t = np.sign(tau) / (abs(tau) + np.hypot(1.0, tau))
                c = 1.0 / np.hypot(1.0, t)
                s = t * c
                # 2x2 unitary diag(1, conj(phase)) . [[c, s], [-s, c]]
                w_pp, w_pq = c, s
                w_qp, w_qq = -s * np.conj(phase), c * np.conj(phase)
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = col_p * w_pp + col_q * w_qp
                a[:, q] = col_p * w_pq + col_q * w_qq
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = np.conj(w_pp) * row_p + np.conj(w_qp) * row_q
                a[q, :] = np.conj(w_pq) * row_p + np.conj(w_qq) * row_q
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real
                vcol_p = v[:, p].copy()
                vcol_q = v[:, q].copy()
                v[:, p] = vcol_p * w_pp + vcol_q * w_qp
                v[:, q] = vcol_p * w_pq + vcol_q * w_qq
    if not converged and max_abs(np.triu(a, 1)) > threshold:
        raise NumericError(f"Jacobi iteration did not converge in {max_sweeps} sweeps")

    values = np.real(np.diag(a)).copy()
    order = np.argsort(-values, kind="stable")
    return values[order], v[:, order]


def polar_unitary(m) -> np.ndarray:
    """Closest unitary to ``m`` in Frobenius norm (the U of the polar form m = U P).

    Raises NumericError when ``m`` is numerically singular and the unitary
    factor is therefore not determined.
    """
    m = _as_matrix(m)
    if m.shape[0] != m.shape[1]:
        raise ShapeError(f"polar decomposition requires a square matrix, got {m.shape}")
    values, vectors = eig_hermitian(dagger(m) @ m)
    values = np.clip(values, 0.0, None)
    if values[-1] <= 1e-24 * max(values[0], 1.0):
        raise NumericError("matrix is numerically singular; polar unitary factor undefined")
    inv_sqrt = vectors @ np.diag(values ** -0.5) @ dagger(vectors)
    return m @ inv_sqrt
