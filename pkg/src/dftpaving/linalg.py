"""Small dense complex linear algebra layer.

Matrices are ``numpy`` ``complex128`` arrays of shape ``(rows, cols)``.
Everything here is a pure function of its inputs; LAPACK does the heavy
lifting and the wrappers add the shape/finiteness/Hermitian checks the rest
of the package relies on.
"""

from __future__ import annotations

import numpy as np

HERMITIAN_TOL = 1e-10


def as_matrix(data) -> np.ndarray:
    """Coerce ``data`` to a finite, non-empty 2-D complex array."""
    a = np.array(data, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={a.ndim}")
    if a.shape[0] < 1 or a.shape[1] < 1:
        raise ValueError(f"matrix must have at least one row and column, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix contains NaN or Inf entries")
    return a


def adjoint(a: np.ndarray) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    a = np.asarray(a)
    b = np.asarray(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"cannot multiply {a.shape[0]}x{a.shape[1]} by {b.shape[0]}x{b.shape[1]}")
    return a @ b


def hermitian_defect(h: np.ndarray) -> float:
    """Largest entrywise ``|H - H*|``."""
    h = np.asarray(h)
    return float(np.max(np.abs(h - adjoint(h)))) if h.size else 0.0


def _check_hermitian(h: np.ndarray) -> np.ndarray:
    h = np.asarray(h)
    if h.ndim != 2 or h.shape[0] != h.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {h.shape}")
    defect = hermitian_defect(h)
    if defect > HERMITIAN_TOL:
        raise ValueError(f"matrix is not Hermitian: max |H - H*| = {defect:.3e} > {HERMITIAN_TOL:g}")
    return h


def min_eigenvalue_hermitian(h: np.ndarray) -> float:
    """Smallest eigenvalue of a Hermitian matrix."""
    h = _check_hermitian(h)
    return float(np.linalg.eigvalsh(h)[0])


def min_eigenpair_hermitian(h: np.ndarray) -> tuple[float, np.ndarray]:
    """Smallest eigenvalue together with a unit eigenvector."""
    h = _check_hermitian(h)
    w, v = np.linalg.eigh(h)
    return float(w[0]), v[:, 0]


def nullspace_vector(a: np.ndarray) -> np.ndarray | None:
    """Return a unit vector ``v`` with ``A v ~ 0``, or ``None`` when A has full column rank.

    The vector is the first right-singular vector past the numerical rank,
    so the choice is deterministic for a given input.
    """
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D matrix, got ndim={a.ndim}")
    rows, cols = a.shape
    if cols == 0:
        return None
    if rows == 0 or not np.any(a):
        v = np.zeros(cols, dtype=np.complex128)
        v[0] = 1.0
        return v
    _, s, vh = np.linalg.svd(a, full_matrices=True)
    tol = max(rows, cols) * np.finfo(float).eps * s[0]
    rank = int(np.count_nonzero(s > tol))
    if rank >= cols:
        return None
    v = vh[rank].conj()
    return v / np.linalg.norm(v)


def operator_norm(a: np.ndarray) -> float:
    """Largest singular value."""
    a = np.asarray(a)
    if a.size == 0 or not np.any(a):
        return 0.0
    return float(np.linalg.norm(a, 2))
