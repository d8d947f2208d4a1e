"""Dense complex linear algebra used throughout the package.

Matrices are plain ``numpy`` arrays of dtype ``complex128``. Vectorization
is row-major: entry ``i*d + j`` of ``vectorize(A)`` is ``A[i, j]``, so that

    vectorize(B @ A) == kron(B, I) @ vectorize(A)
    vectorize(A @ B) == kron(I, B.T) @ vectorize(A)
"""
from __future__ import annotations

import numpy as np
import scipy.linalg

HERM_TOL = 1e-9
NULL_TOL = 1e-9


class NotHermitianError(ValueError):
    pass


def as_matrix(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    if A.ndim != 2:
        raise ValueError(f"expected a 2-d matrix, got shape {A.shape}")
    if not np.all(np.isfinite(A)):
        raise ValueError("matrix has non-finite entries")
    return A


def vectorize(A) -> np.ndarray:
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise ValueError(f"vectorize expects a square matrix, got {A.shape}")
    return A.reshape(-1).copy()


def devectorize(v, d: int | None = None) -> np.ndarray:
    v = np.asarray(v, dtype=complex).reshape(-1)
    if d is None:
        d = int(round(np.sqrt(v.size)))
    if d * d != v.size:
        raise ValueError(f"vector of length {v.size} is not a vectorized {d}x{d} matrix")
    return v.reshape(d, d).copy()


def kron(A, B) -> np.ndarray:
    return np.kron(np.asarray(A, dtype=complex), np.asarray(B, dtype=complex))


def dagger(A) -> np.ndarray:
    return np.conj(np.asarray(A)).T


def is_hermitian(A, tol: float = HERM_TOL) -> bool:
    A = np.asarray(A)
    scale = max(1.0, float(np.max(np.abs(A)))) if A.size else 1.0
    return bool(np.max(np.abs(A - dagger(A)), initial=0.0) <= tol * scale)


def fix_phase(v, tol: float = 1e-8) -> np.ndarray:
    """Multiply ``v`` by a phase so its first significant entry is real positive."""
    v = np.asarray(v, dtype=complex)
    flat = v.reshape(-1)
    if flat.size == 0:
        return v.copy()
    cutoff = tol * np.max(np.abs(flat))
    idx = np.flatnonzero(np.abs(flat) > cutoff)
    if idx.size == 0:
        return v.copy()
    z = flat[idx[0]]
    return v * (np.conj(z) / abs(z))


def hermitian_eig(A, herm_tol: float = HERM_TOL):
    """Eigen-decomposition of a Hermitian matrix.

    Returns ``(eigenvalues, eigenvectors)`` with eigenvalues ascending and
    eigenvectors as orthonormal columns, each phase-fixed so the first
    significant component is real positive.
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise ValueError("hermitian_eig expects a square matrix")
    if not is_hermitian(A, herm_tol):
        raise NotHermitianError("matrix is not Hermitian within tolerance")
    A = 0.5 * (A + dagger(A))
    w, V = np.linalg.eigh(A)
    for k in range(V.shape[1]):
        V[:, k] = fix_phase(V[:, k])
    return w, V


def eigvalsh(A) -> np.ndarray:
    A = np.asarray(A, dtype=complex)
    return np.linalg.eigvalsh(0.5 * (A + dagger(A)))


def canonical_basis(B, tol: float = 1e-8) -> np.ndarray:
    """Deterministic orthonormal basis for the column span of ``B``.

    The span is re-expressed through its orthogonal projector and a
    column-pivoted QR of that projector, so the result depends only on the
    subspace and not on how ``B`` was computed.
    """
    B = np.asarray(B, dtype=complex)
    if B.size == 0 or B.shape[1] == 0:
        return np.zeros((B.shape[0], 0), dtype=complex)
    U, s, _ = np.linalg.svd(B, full_matrices=False)
    r = int(np.sum(s > NULL_TOL * s[0])) if s[0] > 0 else 0
    if r == 0:
        return np.zeros((B.shape[0], 0), dtype=complex)
    Q = U[:, :r]
    P = Q @ dagger(Q)
    Q2, _, _ = scipy.linalg.qr(P, pivoting=True)
    out = Q2[:, :r]
    for k in range(r):
        out[:, k] = fix_phase(out[:, k], tol)
    return out


def null_space(M, tol: float = NULL_TOL) -> list[np.ndarray]:
    """Orthonormal basis of the numerical null space of ``M``.

    Singular values at or below ``tol * sigma_max`` count as zero. The basis
    is canonicalized with :func:`canonical_basis` and phase-fixed.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    M = np.asarray(M, dtype=complex)
    n = M.shape[1]
    if M.shape[0] == 0:
        return [v for v in np.eye(n, dtype=complex).T]
    _, s, Vh = np.linalg.svd(M, full_matrices=True)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > tol * smax)) if smax > 0 else 0
    N = dagger(Vh[rank:])
    if N.shape[1] == 0:
        return []
    basis = canonical_basis(N)
    return [basis[:, k].copy() for k in range(basis.shape[1])]


def random_unitary(d: int, rng: np.random.Generator) -> np.ndarray:
    Z = (rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))) / np.sqrt(2)
    Q, R = np.linalg.qr(Z)
    ph = np.diag(R) / np.abs(np.diag(R))
    return Q * ph


def random_orthogonal(d: int, rng: np.random.Generator) -> np.ndarray:
    Q, R = np.linalg.qr(rng.standard_normal((d, d)))
    Q = Q * np.sign(np.diag(R))
    if np.linalg.det(Q) < 0:
        Q[:, 0] = -Q[:, 0]
    return Q.astype(complex)


def random_density(d: int, rng: np.random.Generator, rank: int | None = None) -> np.ndarray:
    rank = d if rank is None else rank
    G = rng.standard_normal((d, rank)) + 1j * rng.standard_normal((d, rank))
    rho = G @ dagger(G)
    return rho / np.trace(rho).real


def random_pure(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return v / np.linalg.norm(v)


def random_hermitian(d: int, rng: np.random.Generator) -> np.ndarray:
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return 0.5 * (G + dagger(G))
