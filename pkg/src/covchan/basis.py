"""Generalized Gell-Mann bases and coherence-vector coordinates of states."""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .linalg import as_matrix, dagger, eigvalsh, is_hermitian


class PositivityWarning(UserWarning):
    """Reconstructed operator is not positive semidefinite."""


@dataclass(frozen=True)
class HermitianBasis:
    """Orthonormal Hermitian operator basis ``gammas[0..d^2-1]`` with ``gammas[0] = I/sqrt(d)``.

    Ordering of the traceless elements: symmetric off-diagonal pairs
    ``(j<k)`` lexicographic, then antisymmetric pairs in the same order, then
    the diagonal elements. This layout is what fixes the rows and columns of
    affine representations.
    """

    d: int
    gammas: np.ndarray  # shape (d*d, d, d)

    def __len__(self):
        return self.gammas.shape[0]

    def __getitem__(self, mu):
        return self.gammas[mu]

    def labels(self) -> list[str]:
        d = self.d
        pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
        out = ["I"]
        out += [f"s{j}{k}" for j, k in pairs]
        out += [f"a{j}{k}" for j, k in pairs]
        out += [f"z{l}" for l in range(1, d)]
        return out


@dataclass(frozen=True)
class CoherenceVector:
    d: int
    components: np.ndarray  # real, length d*d

    @property
    def traceless(self) -> np.ndarray:
        return self.components[1:]


@lru_cache(maxsize=16)
def _gell_mann(d: int) -> np.ndarray:
    mats = [np.eye(d, dtype=complex) / np.sqrt(d)]
    pairs = [(j, k) for j in range(d) for k in range(j + 1, d)]
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = m[k, j] = 1 / np.sqrt(2)
        mats.append(m)
    for j, k in pairs:
        m = np.zeros((d, d), dtype=complex)
        m[j, k] = -1j / np.sqrt(2)
        m[k, j] = 1j / np.sqrt(2)
        mats.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        mats.append(np.diag(diag / np.sqrt(l * (l + 1))).astype(complex))
    out = np.array(mats)
    out.setflags(write=False)
    return out


def gell_mann_basis(d: int) -> HermitianBasis:
    if d < 2:
        raise ValueError(f"dimension must be at least 2, got {d}")
    return HermitianBasis(d, _gell_mann(d))


def components(A, basis: HermitianBasis) -> np.ndarray:
    """Complex expansion coefficients ``tr(Gamma_mu^dagger A)`` of any d x d matrix."""
    A = as_matrix(A)
    if A.shape != (basis.d, basis.d):
        raise ValueError(f"matrix shape {A.shape} does not match basis dimension {basis.d}")
    return np.einsum("mij,ij->m", np.conj(basis.gammas), A)


def coherence_vector(rho, basis: HermitianBasis) -> CoherenceVector:
    rho = as_matrix(rho)
    if rho.shape != (basis.d, basis.d):
        raise ValueError(f"state shape {rho.shape} does not match basis dimension {basis.d}")
    if not is_hermitian(rho):
        raise ValueError("state is not Hermitian")
    if abs(np.trace(rho) - 1) > 1e-9:
        raise ValueError(f"state trace {np.trace(rho).real:.3g} is not 1")
    c = components(rho, basis)
    return CoherenceVector(basis.d, c.real.copy())


def density_from_coherence(v: CoherenceVector, basis: HermitianBasis) -> np.ndarray:
    """Rebuild ``sum_mu v_mu Gamma_mu``.

    Emits a :class:`PositivityWarning` when the result has an eigenvalue
    below ``-1e-10``; such vectors lie in the purity ball but are not states.
    """
    if v.d != basis.d or len(v.components) != len(basis):
        raise ValueError("coherence vector and basis dimensions differ")
    rho = np.einsum("m,mij->ij", np.asarray(v.components, dtype=complex), basis.gammas)
    lam = eigvalsh(rho)[0]
    if lam < -1e-10:
        warnings.warn(f"reconstructed operator has eigenvalue {lam:.3g} < 0",
                      PositivityWarning, stacklevel=2)
    return rho
