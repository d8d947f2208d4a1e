"""Kraus multiplets of covariant and symmetric channels.

For a multiplet ``(A_1, ..., A_k)`` transforming under a k-dimensional irrep
``Omega`` the covariance condition is

    D2(g)^-1 A_a D1(g) = sum_b Omega_ab(g) A_b          (finite groups)
    A_a D1(T) - D2(T) A_a = sum_b Omega(T)_ab A_b        (Lie algebras)

and the symmetry condition is ``A_a D(g) = sum_b Omega_ab(g) A_b``. Stacking
the row-major vectorized ``A_a`` turns each into a homogeneous linear system,
one block per generator; every null vector is one whole multiplet.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .channel import Channel, apply, kraus_gram
from .groups import (
    FiniteGroupRep,
    LieAlgebraRep,
    conjugate_finite,
    conjugate_rep,
    irrep_multiplicity,
    rep_from_words,
    tensor_finite,
    tensor_rep,
)
from .linalg import NULL_TOL, as_matrix, dagger, kron, null_space, random_density

COVARIANCE_ANGLES = (0.3, 0.7, 1.1)


class SchurError(ValueError):
    """``sum_a A_a^dagger A_a`` is not proportional to the identity."""


@dataclass(frozen=True, eq=False)
class IntertwinerSolution:
    omega: str
    omega_dim: int
    multiplicity: int
    kraus_multiplets: np.ndarray  # (multiplicity, omega_dim, d, d)
    residual: float
    predicted: int | None = None

    @property
    def d(self) -> int:
        return self.kraus_multiplets.shape[-1]

    def multiplet(self, coeffs) -> np.ndarray:
        """Linear combination ``sum_j c_j multiplet_j`` of the basis multiplets."""
        c = np.asarray(coeffs, dtype=complex).reshape(-1)
        if c.size != self.multiplicity:
            raise ValueError(f"need {self.multiplicity} coefficients, got {c.size}")
        return np.einsum("j,jaik->aik", c, self.kraus_multiplets)

    def coordinates(self, kraus) -> tuple[np.ndarray, float]:
        """Project a candidate multiplet onto the solution space.

        Returns the coefficients and the norm of the part lying outside it.
        """
        K = np.asarray(kraus, dtype=complex).reshape(self.omega_dim, self.d, self.d)
        if self.multiplicity == 0:
            return np.zeros(0, dtype=complex), float(np.linalg.norm(K))
        S =self.kraus_multiplets.reshape(self.multiplicity, -1)
        v = K.reshape(-1)
        c = np.conj(S) @ v
        return c, float(np.linalg.norm(v - S.T @ c))


def _stack_solve(blocks, k: int, d: int, name: str, predicted) -> IntertwinerSolution:
    M = np.vstack(blocks) if blocks else np.zeros((0, k * d * d))
    vecs = null_space(M, NULL_TOL)
    if vecs:
        X = np.array(vecs)
        residual = max(float(np.max(np.linalg.norm(b @ X.T, axis=0))) for b in blocks) if blocks else 0.0
        multiplets = X.reshape(len(vecs), k, d, d)
    else:
        residual = 0.0
        multiplets = np.zeros((0, k, d, d), dtype=complex)
    return IntertwinerSolution(name, k, len(vecs), multiplets, residual, predicted)


def _trivial_like(rep: FiniteGroupRep, dim: int) -> FiniteGroupRep:
    return rep_from_words(f"1^{dim}", rep, [np.eye(dim)] * len(rep.generator_indices))


def solve_intertwiners_finite(d1: FiniteGroupRep, d2: FiniteGroupRep, omega: FiniteGroupRep) -> IntertwinerSolution:
    if d1.dim != d2.dim:
        raise ValueError("input and output representations must have the same dimension")
    if not (d1.order == d2.order == omega.order):
        raise ValueError("representations belong to groups of different order")
    d, k = d1.dim, omega.dim
    Ik = np.eye(k)
    blocks = []
    for g in d1.generator_indices:
        D1, D2, W = d1.elements[g], d2.elements[g], omega.elements[g]
        blocks.append(kron(Ik, kron(dagger(D2), D1.T)) - kron(W, np.eye(d * d)))
    try:
        predicted = irrep_multiplicity(omega, tensor_finite(d1, conjugate_finite(d2)))
    except ValueError:
        predicted = None
    return _stack_solve(blocks, k, d, omega.name, predicted)


def solve_symmetric_finite(d: FiniteGroupRep, omega: FiniteGroupRep) -> IntertwinerSolution:
    """Multiplets with ``A_a D(g) = sum_b Omega_ab(g) A_b``."""
    return solve_intertwiners_finite(d, _trivial_like(d, d.dim), omega)


def solve_intertwiners_lie(d1: LieAlgebraRep, d2: LieAlgebraRep, omega: LieAlgebraRep) -> IntertwinerSolution:
    if d1.dim != d2.dim:
        raise ValueError("input and output representations must have the same dimension")
    if not (d1.algebra == d2.algebra == omega.algebra):
        raise ValueError("representations of different algebras")
    d, k = d1.dim, omega.dim
    Id, Ik = np.eye(d), np.eye(k)
    blocks = []
    for T1, T2, W in zip(d1.generators, d2.generators, omega.generators):
        L = kron(Id, T1.T) - kron(T2, Id)
        blocks.append(kron(Ik, L) - kron(W, np.eye(d * d)))
    predicted = irrep_multiplicity(omega, tensor_rep(d1, conjugate_rep(d2)))
    return _stack_solve(blocks, k, d, omega.name, predicted)


def normalize_tp(kraus, tol: float = 1e-8, label: str = "") -> Channel:
    """Rescale a Kraus set with ``sum A^dagger A = c I`` to a trace-preserving channel."""
    ch = Channel(np.asarray(kraus, dtype=complex))
    G = kraus_gram(ch)
    c = np.trace(G).real / ch.d
    if c <= 0:
        raise SchurError("Kraus operators are all zero")
    dev = float(np.linalg.norm(G - c * np.eye(ch.d), 2))
    if dev > tol * c:
        raise SchurError(f"sum A^dagger A deviates from {c:.6g} I by {dev:.3g}")
    return Channel(ch.kraus / np.sqrt(c), label=label, meta={"schur_constant": c})


def solution_channel(sol: IntertwinerSolution, coeffs=None, label: str = "") -> Channel:
    """TP-normalized channel built from one multiplet of ``sol``."""
    if sol.multiplicity == 0:
        raise ValueError(f"no solutions for omega={sol.omega}")
    if coeffs is None:
        coeffs = np.eye(sol.multiplicity)[0]
    return normalize_tp(sol.multiplet(coeffs), label=label or f"omega={sol.omega}")


@dataclass(frozen=True)
class CovarianceReport:
    covariant: bool
    max_residual: float


def group_actions(d1, d2=None) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairs ``(D1(g), D2(g))`` used to test covariance.

    Finite groups contribute their generators, Lie algebras each generator
    exponentiated at three fixed angles, and plain sequences of matrices are
    paired up as given.
    """
    d2 = d1 if d2 is None else d2
    if isinstance(d1, FiniteGroupRep):
        if not isinstance(d2, FiniteGroupRep) or d1.order != d2.order:
            raise ValueError("both representations must belong to the same finite group")
        return [(d1.elements[g], d2.elements[g]) for g in d1.generator_indices]
    if isinstance(d1, LieAlgebraRep):
        if not isinstance(d2, LieAlgebraRep) or d1.algebra != d2.algebra:
            raise ValueError("both representations must belong to the same Lie algebra")
        return [(d1.element(n, t), d2.element(n, t))
                for n in range(d1.generators.shape[0]) for t in COVARIANCE_ANGLES]
    g1 = [as_matrix(u) for u in d1]
    g2 = [as_matrix(u) for u in d2]
    if len(g1) != len(g2):
        raise ValueError("need one output matrix per input matrix")
    return list(zip(g1, g2))


def _test_states(d: int, n_states: int, seed) -> list[np.ndarray]:
    rng = np.random.default_rng(seed)
    return [random_density(d, rng) for _ in range(n_states)]


def check_covariance(ch: Channel, d1, d2=None, tol: float = 1e-9, n_states: int = 25,
                     seed=1234) -> CovarianceReport:
    worst = 0.0
    pairs = group_actions(d1, d2)
    for U1, U2 in pairs:
        if U1.shape != (ch.d, ch.d) or U2.shape != (ch.d, ch.d):
            raise ValueError("representation dimension does not match the channel")
    for rho in _test_states(ch.d, n_states, seed):
        out = apply(ch, rho)
        for U1, U2 in pairs:
            lhs = U2 @ out @ dagger(U2)
            rhs = apply(ch, U1 @ rho @ dagger(U1))
            worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    return CovarianceReport(worst <= tol, worst)


@dataclass(frozen=True)
class SymmetryReport:
    symmetric: bool
    max_residual: float


def check_symmetry(ch: Channel, d, tol: float = 1e-9, n_states: int = 25, seed=1234) -> SymmetryReport:
    pairs = group_actions(d, d)
    for U, _ in pairs:
        if U.shape != (ch.d, ch.d):
            raise ValueError("representation dimension does not match the channel")
    worst = 0.0
    for rho in _test_states(ch.d, n_states, seed):
        out = apply(ch, rho)
        for U, _ in pairs:
            worst = max(worst, float(np.linalg.norm(apply(ch, U @ rho @ dagger(U)) - out)))
    return SymmetryReport(worst <= tol, worst)


def completeness(solutions: Sequence[IntertwinerSolution]) -> int:
    """``sum multiplicity * dim(Omega)``; equals ``d^2`` when every irrep was tried."""
    return sum(s.multiplicity * s.omega_dim for s in solutions)
