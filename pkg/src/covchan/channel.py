"""Channels in Kraus form: action, Choi matrix, classification, affine picture.

A :class:`Channel` is ``rho -> sum_a s_a A_a rho A_a^dagger``. Ordinary
(completely positive) channels have all signs ``s_a = +1``; a negative sign
is only used to represent Hermiticity-preserving maps that are not CP, such
as members of a parametric family evaluated outside their CP interval.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .basis import CoherenceVector, HermitianBasis
from .linalg import as_matrix, dagger, devectorize, eigvalsh, hermitian_eig, is_hermitian

CLASSIFY_TOL = 1e-9


class NotCPError(ValueError):
    """The Choi matrix has a negative eigenvalue below tolerance."""


@dataclass(frozen=True, eq=False)
class Channel:
    kraus: np.ndarray
    signs: np.ndarray | None = None
    label: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        K = np.array(self.kraus, dtype=complex)
        if K.ndim == 2:
            K = K[None]
        if K.ndim != 3 or K.shape[0] == 0 or K.shape[1] != K.shape[2]:
            raise ValueError(f"Kraus operators must be a nonempty list of square matrices, got shape {K.shape}")
        if not np.all(np.isfinite(K)):
            raise ValueError("Kraus operators contain non-finite entries")
        K.setflags(write=False)
        object.__setattr__(self, "kraus", K)
        if self.signs is not None:
            s = np.asarray(self.signs, dtype=float).reshape(-1)
            if s.size != K.shape[0] or not np.all(np.isin(s, (-1.0, 1.0))):
                raise ValueError("signs must be +1/-1, one per Kraus operator")
            if np.all(s > 0):
                s = None
            else:
                s.setflags(write=False)
            object.__setattr__(self, "signs", s)

    @property
    def d(self) -> int:
        return self.kraus.shape[1]

    @property
    def signed(self) -> bool:
        return self.signs is not None

    @property
    def weights(self) -> np.ndarray:
        return np.ones(len(self.kraus)) if self.signs is None else self.signs

    def __len__(self):
        return self.kraus.shape[0]

    def __call__(self, rho):
        return apply(self, rho)

    def with_meta(self, **kw) -> "Channel":
        return Channel(self.kraus, self.signs, kw.pop("label", self.label), {**self.meta, **kw})


def _check_dim(ch: Channel, A: np.ndarray):
    if A.shape != (ch.d, ch.d):
        raise ValueError(f"operator shape {A.shape} does not match channel dimension {ch.d}")


def apply(ch: Channel, rho) -> np.ndarray:
    rho = as_matrix(rho)
    _check_dim(ch, rho)
    K = ch.kraus
    out = np.einsum("a,aij,jk,alk->il", ch.weights, K, rho, np.conj(K))
    return out


def identity_channel(d: int = 3) -> Channel:
    return Channel(np.eye(d)[None], label="identity")


def completely_mixing_channel(d: int = 3) -> Channel:
    K = np.zeros((d * d, d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            K[i * d + j, i, j] = 1 / np.sqrt(d)
    return Channel(K, label="mixing")


def transpose_channel(d: int = 3) -> Channel:
    """``rho -> (tr(rho) I + rho^T) / (d + 1)`` with Kraus ``|i><j| + |j><i|``."""
    K = np.zeros((d * d, d, d), dtype=complex)
    for i in range(d):
        for j in range(d):
            K[i * d + j, i, j] += 1
            K[i * d + j, j, i] += 1
    return Channel(K / np.sqrt(2 * (d + 1)), label="transpose")


def choi(ch: Channel) -> np.ndarray:
    """Unnormalized Choi matrix ``sum_ij E(|i><j|) (x) |i><j|`` (trace d for TP maps)."""
    V = ch.kraus.reshape(len(ch), -1)
    return np.einsum("a,ai,aj->ij", ch.weights, V, np.conj(V))


def min_choi_eigenvalue(ch: Channel) -> float:
    return float(eigvalsh(choi(ch))[0])


@dataclass(frozen=True)
class Classification:
    cp: bool
    tp: bool
    unital: bool
    min_choi_eigenvalue: float
    tp_residual: float
    unital_residual: float


def kraus_gram(ch: Channel) -> np.ndarray:
    """``sum_a s_a A_a^dagger A_a``."""
    return np.einsum("a,aji,ajk->ik", ch.weights, np.conj(ch.kraus), ch.kraus)


def kraus_cogram(ch: Channel) -> np.ndarray:
    """``sum_a s_a A_a A_a^dagger``."""
    return np.einsum("a,aij,akj->ik", ch.weights, ch.kraus, np.conj(ch.kraus))


def classify(ch: Channel, tol: float = CLASSIFY_TOL) -> Classification:
    if tol <= 0:
        raise ValueError("tol must be positive")
    eye = np.eye(ch.d)
    lam = min_choi_eigenvalue(ch)
    tp_res = float(np.linalg.norm(kraus_gram(ch) - eye, 2))
    un_res = float(np.linalg.norm(kraus_cogram(ch) - eye, 2))
    return Classification(lam >= -tol, tp_res <= tol, un_res <= tol, lam, tp_res, un_res)


@dataclass(frozen=True)
class AffineRep:
    """Matrix ``Lambda[mu, nu] = tr(Gamma_mu^dagger E(Gamma_nu))`` and its blocks.

    ``t_vec`` is column 0 below the corner and ``lambda_block`` the
    traceless-traceless block, so for a TP map the traceless coherence
    components transform as ``r -> lambda_block @ r + t_vec / sqrt(d)``.
    """

    d: int
    lambda_full: np.ndarray
    t_vec: np.ndarray
    lambda_block: np.ndarray

    @property
    def row0(self) -> np.ndarray:
        return self.lambda_full[0, 1:]

    @property
    def col0(self) -> np.ndarray:
        return self.lambda_full[1:, 0]


def affine_rep(ch: Channel, basis: HermitianBasis) -> AffineRep:
    if basis.d != ch.d:
        raise ValueError("basis and channel dimensions differ")
    G = basis.gammas
    K = ch.kraus
    # E(Gamma_nu) for every nu, then project on Gamma_mu
    out = np.einsum("a,aij,njk,alk->nil", ch.weights, K, G, np.conj(K))
    L = np.einsum("mji,nji->mn", np.conj(G), out)
    if np.max(np.abs(L.imag)) > 1e-10:
        raise ValueError("affine representation has imaginary entries; map is not Hermiticity preserving")
    L = L.real.copy()
    return AffineRep(ch.d, L, L[1:, 0].copy(), L[1:, 1:].copy())


def apply_affine(ar: AffineRep, v: CoherenceVector) -> CoherenceVector:
    if v.d != ar.d or len(v.components) != ar.lambda_full.shape[1]:
        raise ValueError("coherence vector and affine representation dimensions differ")
    return CoherenceVector(ar.d, ar.lambda_full @ np.asarray(v.components, dtype=float))


def channels_equal(ch1: Channel, ch2: Channel, tol: float = 1e-9) -> bool:
    if ch1.d != ch2.d:
        raise ValueError("channels act on different dimensions")
    return bool(np.linalg.norm(choi(ch1) - choi(ch2)) <= tol)


def choi_distance(ch1: Channel, ch2: Channel) -> float:
    if ch1.d != ch2.d:
        raise ValueError("channels act on different dimensions")
    return float(np.linalg.norm(choi(ch1) - choi(ch2)))


def _check_choi(J) -> tuple[np.ndarray, int]:
    J = as_matrix(J)
    n = J.shape[0]
    d = int(round(np.sqrt(n)))
    if J.shape != (n, n) or d * d != n:
        raise ValueError(f"Choi matrix must be d^2 x d^2, got {J.shape}")
    if not is_hermitian(J):
        raise ValueError("Choi matrix is not Hermitian")
    return J, d


def kraus_from_choi(J, tol: float = CLASSIFY_TOL, label: str = "") -> Channel:
    """Canonical Kraus operators ``sqrt(lambda_k) devec(v_k)`` of a PSD Choi matrix."""
    J, d = _check_choi(J)
    w, V = hermitian_eig(J)
    if w[0] < -tol:
        raise NotCPError(f"Choi matrix has eigenvalue {w[0]:.3g} < -{tol:g}; map is not CP")
    keep = np.flatnonzero(w > tol)[::-1]
    if keep.size == 0:
        return Channel(np.zeros((1, d, d)), label=label)
    K = np.array([np.sqrt(w[k]) * devectorize(V[:, k], d) for k in keep])
    return Channel(K, label=label)


def map_from_choi(J, tol: float = CLASSIFY_TOL, label: str = "") -> Channel:
    """Signed Kraus form of any Hermiticity-preserving map given by its Choi matrix."""
    J, d = _check_choi(J)
    w, V = hermitian_eig(J)
    order = np.argsort(-np.abs(w))
    keep = [k for k in order if abs(w[k]) > tol]
    if not keep:
        return Channel(np.zeros((1, d, d)), label=label)
    K = np.array([np.sqrt(abs(w[k])) * devectorize(V[:, k], d) for k in keep])
    signs = np.sign([w[k] for k in keep])
    return Channel(K, signs, label=label)


def weighted_sum(terms: Sequence[tuple[float, Channel]], label: str = "") -> Channel:
    """``sum_i w_i E_i`` for real weights of either sign, as a (possibly signed) Kraus list."""
    if not terms:
        raise ValueError("no channels given")
    d = terms[0][1].d
    K, s = [], []
    for w, ch in terms:
        if ch.d != d:
            raise ValueError("channels act on different dimensions")
        if w == 0:
            continue
        K.append(np.sqrt(abs(w)) * ch.kraus)
        s.append(np.sign(w) * ch.weights)
    if not K:
        return Channel(np.zeros((1, d, d)), label=label)
    return Channel(np.concatenate(K), np.concatenate(s), label=label)


def convex_combine(channels: Sequence[Channel], weights: Sequence[float], label: str = "") -> Channel:
    weights = np.asarray(weights, dtype=float)
    if len(channels) != len(weights) or len(channels) == 0:
        raise ValueError("need one weight per channel")
    if np.any(weights < 0) or abs(weights.sum() - 1) > 1e-9:
        raise ValueError("weights must be a probability vector")
    return weighted_sum(list(zip(weights, channels)), label=label)


def mix_kraus(ch: Channel, U) -> Channel:
    """Kraus list ``B_a = sum_b U_ab A_b``; the same channel whenever ``U`` is unitary."""
    U = as_matrix(U)
    if ch.signed:
        raise ValueError("unitary Kraus mixing is only defined for CP channels")
    return Channel(np.einsum("ab,bij->aij", U, ch.kraus), label=ch.label, meta=dict(ch.meta))


def is_unitary(U, tol: float = 1e-10) -> bool:
    U = np.asarray(U)
    return bool(np.max(np.abs(dagger(U) @ U - np.eye(U.shape[1]))) <= tol)
