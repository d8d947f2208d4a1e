"""Finite groups and Lie algebras acting on qudits, with their small irreps.

Finite groups are stored as explicit element lists sharing one
multiplication table; every representation of the same abstract group
(defining rep, irreps, tensor products) indexes its elements identically,
so characters can be paired entry by entry. Projective representations
(the Weyl-Heisenberg/Pauli operators) record the phase cocycle.

Lie algebras are stored by Hermitian generator matrices ``T_n``, with the
group element ``exp(i theta T_n)``. For su(3) the generator order is
``H1, H2, T1, T2, T4, T5, T6, T7`` with ``T_a = lambda_a / 2`` built from the
Gell-Mann matrices, so ``H1 = T3`` and ``H2 = T8``.
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .linalg import as_matrix, canonical_basis, dagger, kron

PHASE_TOL = 1e-10


class RepresentationError(ValueError):
    pass


# ---------------------------------------------------------------------------
# finite groups
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class FiniteGroupRep:
    name: str
    elements: np.ndarray  # (order, dim, dim)
    words: tuple  # words[g] is a tuple of generator indices, () for the identity
    generator_indices: tuple
    mult_table: np.ndarray  # (order, order) int
    phases: np.ndarray | None = None  # elements[g] @ elements[h] = phases[g,h] * elements[mult[g,h]]

    @property
    def order(self) -> int:
        return self.elements.shape[0]

    @property
    def dim(self) -> int:
        return self.elements.shape[1]

    @property
    def generators(self) -> list[np.ndarray]:
        return [self.elements[i] for i in self.generator_indices]

    @property
    def projective(self) -> bool:
        return self.phases is not None

    def character(self) -> np.ndarray:
        return np.trace(self.elements, axis1=1, axis2=2)

    def inverse_index(self, g: int) -> int:
        return int(np.flatnonzero(self.mult_table[g] == 0)[0])

    def check(self, tol: float = PHASE_TOL) -> float:
        """Largest deviation from the multiplication table (after recorded phases)."""
        err = 0.0
        E = self.elements
        for g in range(self.order):
            for h in range(self.order):
                ph = 1.0 if self.phases is None else self.phases[g, h]
                err = max(err, float(np.max(np.abs(E[g] @ E[h] - ph * E[self.mult_table[g, h]]))))
        if err > tol:
            raise RepresentationError(f"{self.name}: multiplication table violated by {err:.3g}")
        return err


def _match(M, mats, projective):
    for k, E in enumerate(mats):
        if projective:
            z = np.vdot(E, M) / M.shape[0]
            if abs(abs(z) - 1) < 1e-8 and np.max(np.abs(M - z * E)) < 1e-8:
                return k, z
        elif np.max(np.abs(M - E)) < 1e-8:
            return k, 1.0
    return None, None


def _table(elements, projective):
    n = len(elements)
    table = np.zeros((n, n), dtype=int)
    phases = np.ones((n, n), dtype=complex)
    for g in range(n):
        for h in range(n):
            k, z = _match(elements[g] @ elements[h], elements, projective)
            if k is None:
                raise RepresentationError("element set is not closed under multiplication")
            table[g, h], phases[g, h] = k, z
    return table, (phases if projective else None)


def generate_group(name: str, generators, projective: bool = False, max_order: int = 512) -> FiniteGroupRep:
    """Close a set of unitary generators under multiplication (breadth first)."""
    gens = [as_matrix(g) for g in generators]
    dim = gens[0].shape[0]
    elements = [np.eye(dim, dtype=complex)]
    words = [()]
    frontier = [0]
    while frontier:
        nxt = []
        for e in frontier:
            for gi, g in enumerate(gens):
                M = elements[e] @ g
                k, _ = _match(M, elements, projective)
                if k is None:
                    elements.append(M)
                    words.append(words[e] + (gi,))
                    nxt.append(len(elements) - 1)
                    if len(elements) > max_order:
                        raise RepresentationError(f"group generated by {name} exceeds order {max_order}")
        frontier = nxt
    table, phases = _table(elements, projective)
    gen_idx = tuple(_match(g, elements, projective)[0] for g in gens)
    return FiniteGroupRep(name, np.array(elements), tuple(words), gen_idx, table, phases)


def rep_from_words(name: str, reference: FiniteGroupRep, generators) -> FiniteGroupRep:
    """Representation of ``reference``'s abstract group sending generator ``i`` to ``generators[i]``."""
    gens = [as_matrix(g) for g in generators]
    dim = gens[0].shape[0]
    elements = []
    for w in reference.words:
        M = np.eye(dim, dtype=complex)
        for gi in w:
            M = M @ gens[gi]
        elements.append(M)
    rep = FiniteGroupRep(name, np.array(elements), reference.words, reference.generator_indices,
                         reference.mult_table, None)
    rep.check()
    return rep


def cyclic_rep(n: int, generator, projective: bool = False, name: str | None = None) -> FiniteGroupRep:
    """``{I, X, ..., X^(n-1)}`` for a generator with ``X^n = I`` (up to phase if projective)."""
    X = as_matrix(generator)
    if n < 1:
        raise ValueError("group order must be positive")
    Xn = np.linalg.matrix_power(X, n)
    eye = np.eye(X.shape[0])
    if projective:
        z = Xn[0, 0]
        ok = abs(abs(z) - 1) < 1e-10 and np.max(np.abs(Xn - z * eye)) < 1e-10
    else:
        ok = np.max(np.abs(Xn - eye)) < 1e-10
    if not ok:
        raise RepresentationError(f"generator does not satisfy X^{n} = I")
    elements = np.array([np.linalg.matrix_power(X, j) for j in range(n)])
    table = np.add.outer(np.arange(n), np.arange(n)) % n
    phases = None
    if projective:
        phases = np.ones((n, n), dtype=complex)
        for g in range(n):
            for h in range(n):
                phases[g, h] = np.vdot(elements[table[g, h]], elements[g] @ elements[h]) / X.shape[0]
    words = tuple((0,) * j for j in range(n))
    gen_idx = (1 % n,) if n > 1 else (0,)
    return FiniteGroupRep(name or f"Z{n}", elements, words, gen_idx, table, phases)


def cyclic_irrep(group: FiniteGroupRep, k: int) -> FiniteGroupRep:
    """1-dim irrep of a cyclic group sending its generator to ``exp(2 pi i k / n)``."""
    n = group.order
    vals = np.exp(2j * np.pi * k * np.array([len(w) for w in group.words]) / n)
    return FiniteGroupRep(f"{group.name}[{k}]", vals.reshape(n, 1, 1), group.words,
                          group.generator_indices, group.mult_table, None)


def conjugate_finite(rep: FiniteGroupRep) -> FiniteGroupRep:
    ph = None if rep.phases is None else np.conj(rep.phases)
    return FiniteGroupRep(f"conj({rep.name})", np.conj(rep.elements), rep.words,
                          rep.generator_indices, rep.mult_table, ph)


def tensor_finite(r1: FiniteGroupRep, r2: FiniteGroupRep) -> FiniteGroupRep:
    if r1.order != r2.order or not np.array_equal(r1.mult_table, r2.mult_table):
        raise RepresentationError("tensor product needs two representations of the same group")
    ph = None
    if r1.phases is not None or r2.phases is not None:
        p1 = np.ones_like(r1.mult_table, dtype=complex) if r1.phases is None else r1.phases
        p2 = np.ones_like(r2.mult_table, dtype=complex) if r2.phases is None else r2.phases
        ph = p1 * p2
    E = np.array([kron(a, b) for a, b in zip(r1.elements, r2.elements)])
    return FiniteGroupRep(f"{r1.name}x{r2.name}", E, r1.words, r1.generator_indices, r1.mult_table, ph)


def omega(d: int) -> complex:
    return np.exp(2j * np.pi / d)


def hadamard(d: int = 3) -> np.ndarray:
    """Discrete Fourier matrix ``(1/sqrt d) sum_ij w^(ij) |i><j|``."""
    if d < 2:
        raise ValueError("dimension must be at least 2")
    i, j = np.indices((d, d))
    return omega(d) ** (i * j) / np.sqrt(d)


def hadamard_group(d: int = 3) -> FiniteGroupRep:
    return cyclic_rep(4, hadamard(d), name=f"H{d}")


# irreps of <H> are labelled by the eigenvalue mu assigned to H
HADAMARD_IRREPS = {"1": 0, "i": 1, "-1": 2, "-i": 3}


def hadamard_irrep(group: FiniteGroupRep, mu: str) -> FiniteGroupRep:
    try:
        k = HADAMARD_IRREPS[mu]
    except KeyError:
        raise ValueError(f"Hadamard irrep label must be one of {list(HADAMARD_IRREPS)}") from None
    rep = cyclic_irrep(group, k)
    return FiniteGroupRep(f"{group.name}[{mu}]", rep.elements, rep.words, rep.generator_indices,
                          rep.mult_table, None)


def shift(d: int) -> np.ndarray:
    return np.roll(np.eye(d, dtype=complex), 1, axis=0)


def clock(d: int) -> np.ndarray:
    return np.diag(omega(d) ** np.arange(d))


def pauli_op(d: int, m: int, n: int) -> np.ndarray:
    """``X_mn = X^m Z^n = sum_j w^(jn) |j+m><j|``."""
    if not (0 <= m < d and 0 <= n < d):
        raise ValueError(f"Pauli indices ({m},{n}) out of range for d={d}")
    out = np.zeros((d, d), dtype=complex)
    w = omega(d)
    for j in range(d):
        out[(j + m) % d, j] = w ** (j * n)
    return out


def pauli_group(d: int = 3) -> FiniteGroupRep:
    """Projective rep of Z_d x Z_d by ``X_mn``; element index ``m*d + n``."""
    elements = np.array([pauli_op(d, m, n) for m in range(d) for n in range(d)])
    N = d * d
    table = np.zeros((N, N), dtype=int)
    phases = np.ones((N, N), dtype=complex)
    w = omega(d)
    for k in range(d):
        for l in range(d):
            for m in range(d):
                for n in range(d):
                    table[k * d + l, m * d + n] = ((k + m) % d) * d + (l + n) % d
                    phases[k * d + l, m * d + n] = w ** (l * m)
    words = []
    for m in range(d):
        for n in range(d):
            words.append((0,) * m + (1,) * n)
    return FiniteGroupRep(f"Pauli{d}", elements, tuple(words), (d, 1), table, phases)


def pauli_subgroup(d: int, m: int, n: int) -> FiniteGroupRep:
    """Cyclic subgroup generated by ``X_mn`` (as a projective rep)."""
    X = pauli_op(d, m, n)
    order = 1
    while order <= d * d:
        P = np.linalg.matrix_power(X, order)
        if abs(abs(P[0, 0]) - 1) < 1e-10 and np.max(np.abs(P - P[0, 0] * np.eye(d))) < 1e-10:
            break
        order += 1
    return cyclic_rep(order, X, projective=True, name=f"<X{m}{n}>")


class S3Reps(NamedTuple):
    defining: FiniteGroupRep
    irreps: dict


def s3_reps() -> S3Reps:
    """S3 generated by the transpositions (01) and (12) on a qutrit, plus its three irreps."""
    s1 = np.array([[0, 1, 0], [1, 0, 0], [0, 0, 1]], dtype=complex)
    s2 = np.array([[1, 0, 0], [0, 0, 1], [0, 1, 0]], dtype=complex)
    defining = generate_group("S3", [s1, s2])
    r3 = np.sqrt(3)
    irreps = {
        "1": rep_from_words("S3[1]", defining, [np.eye(1), np.eye(1)]),
        "1'": rep_from_words("S3[1']", defining, [-np.eye(1), -np.eye(1)]),
        "2": rep_from_words("S3[2]", defining,
                            [np.diag([1.0, -1.0]), 0.5 * np.array([[-1, r3], [r3, 1]])]),
    }
    return S3Reps(defining, irreps)


def irrep_multiplicity_finite(target: FiniteGroupRep, product: FiniteGroupRep, tol: float = 1e-6) -> int:
    """``(1/|G|) sum_g conj(chi_target(g)) chi_product(g)``, required to be an integer."""
    if target.order != product.order:
        raise RepresentationError("representations belong to different groups")
    m = np.vdot(target.character(), product.character()) / target.order
    k = int(round(m.real))
    if abs(m - k) > tol:
        raise RepresentationError(f"character inner product {m:.6g} is not an integer")
    return k


# ---------------------------------------------------------------------------
# Lie algebras
# ---------------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class LieAlgebraRep:
    name: str
    algebra: str
    generators: np.ndarray  # (n_gen, dim, dim), Hermitian
    n_cartan: int

    @property
    def dim(self) -> int:
        return self.generators.shape[1]

    @property
    def cartan(self) -> np.ndarray:
        return self.generators[: self.n_cartan]

    @property
    def abelian(self) -> bool:
        return self.n_cartan == self.generators.shape[0]

    def element(self, n: int, theta: float) -> np.ndarray:
        """``exp(i theta T_n)`` in this representation."""
        w, V = np.linalg.eigh(self.generators[n])
        return (V * np.exp(1j * theta * w)) @ dagger(V)


def _gell_mann_lambdas():
    l = np.zeros((9, 3, 3), dtype=complex)
    l[1][0, 1] = l[1][1, 0] = 1
    l[2][0, 1], l[2][1, 0] = -1j, 1j
    l[3] = np.diag([1, -1, 0])
    l[4][0, 2] = l[4][2, 0] = 1
    l[5][0, 2], l[5][2, 0] = -1j, 1j
    l[6][1, 2] = l[6][2, 1] = 1
    l[7][1, 2], l[7][2, 1] = -1j, 1j
    l[8] = np.diag([1, 1, -2]) / np.sqrt(3)
    return l


SU3_ORDER = (3, 8, 1, 2, 4, 5, 6, 7)  # Gell-Mann indices of the generator slots
_SU3_CONJ = {"1": "1", "8": "8", "3": "3bar", "3bar": "3", "6": "6bar", "6bar": "6"}


def _su3_fundamental() -> np.ndarray:
    lam = _gell_mann_lambdas()
    return np.array([lam[a] / 2 for a in SU3_ORDER])


def _restrict(T: np.ndarray, B: np.ndarray) -> np.ndarray:
    return np.einsum("ia,nij,jb->nab", np.conj(B), T, B)


def conjugate_rep(r: LieAlgebraRep) -> LieAlgebraRep:
    """``T -> -T^T``."""
    name = _SU3_CONJ.get(r.name, f"conj({r.name})") if r.algebra == "su3" else f"conj({r.name})"
    return LieAlgebraRep(name, r.algebra, -np.transpose(r.generators, (0, 2, 1)), r.n_cartan)


def tensor_rep(r1: LieAlgebraRep, r2: LieAlgebraRep) -> LieAlgebraRep:
    """Generators ``T (x) I + I (x) T``."""
    if r1.algebra != r2.algebra or r1.generators.shape[0] != r2.generators.shape[0]:
        raise RepresentationError("tensor product of representations of different algebras")
    I1, I2 = np.eye(r1.dim), np.eye(r2.dim)
    T = np.array([kron(a, I2) + kron(I1, b) for a, b in zip(r1.generators, r2.generators)])
    return LieAlgebraRep(f"{r1.name}x{r2.name}", r1.algebra, T, r1.n_cartan)


def _swap(d: int) -> np.ndarray:
    S = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            S[i * d + j, j * d + i] = 1
    return S


SU3_LABELS = ("1", "3", "3bar", "6", "6bar", "8")


@lru_cache(maxsize=None)
def su3_rep(label: str) -> LieAlgebraRep:
    if label not in SU3_LABELS:
        raise ValueError(f"unknown su(3) irrep {label!r}; expected one of {SU3_LABELS}")
    if label == "1":
        return LieAlgebraRep("1", "su3", np.zeros((8, 1, 1), dtype=complex), 2)
    fund = LieAlgebraRep("3", "su3", _su3_fundamental(), 2)
    if label == "3":
        return fund
    if label == "3bar":
        return conjugate_rep(fund)
    if label in ("6", "6bar"):
        prod = tensor_rep(fund, fund)
        P = (np.eye(9) + _swap(3)) / 2
        six = LieAlgebraRep("6", "su3", _restrict(prod.generators, canonical_basis(P)), 2)
        return six if label == "6" else conjugate_rep(six)
    prod = tensor_rep(fund, conjugate_rep(fund))
    phi = np.eye(3).reshape(-1)
    P = np.eye(9) - np.outer(phi, phi) / 3
    return LieAlgebraRep("8", "su3", _restrict(prod.generators, canonical_basis(P)), 2)


def su3_root_generators(rep: LieAlgebraRep) -> dict:
    """Raising/lowering operators ``E_alpha`` keyed by root ``(alpha_1, alpha_2)``.

    Realized as ``T1 +/- i T2``, ``T4 +/- i T5``, ``T6 +/- i T7``; in the
    fundamental these are the matrix units ``|i><j|``.
    """
    T = rep.generators
    s3 = np.sqrt(3) / 2
    return {
        (1.0, 0.0): T[2] + 1j * T[3],
        (-1.0, 0.0): T[2] - 1j * T[3],
        (0.5, s3): T[4] + 1j * T[5],
        (-0.5, -s3): T[4] - 1j * T[5],
        (-0.5, s3): T[6] + 1j * T[7],
        (0.5, -s3): T[6] - 1j * T[7],
    }


def u1_phase_rep(charges=(0, 0, 1), name: str = "phase") -> LieAlgebraRep:
    """U(1) acting by ``diag(exp(i q_k theta))``; the default is ``diag(1, 1, e^{i theta})``."""
    return LieAlgebraRep(name, "u1", np.diag(np.asarray(charges, dtype=complex))[None], 1)


def u1u1_phase_rep(d: int = 3, name: str = "phase2") -> LieAlgebraRep:
    """U(1)xU(1) acting by ``diag(1, e^{i theta_1}, e^{i theta_2})``."""
    T = np.zeros((2, d, d), dtype=complex)
    T[0, 1, 1] = 1
    T[1, 2, 2] = 1
    return LieAlgebraRep(name, "u1u1", T, 2)


def abelian_irrep(algebra: str, charges) -> LieAlgebraRep:
    q = np.atleast_1d(np.asarray(charges, dtype=float))
    label = ",".join(f"{x:g}" for x in q)
    return LieAlgebraRep(f"({label})", algebra, q.astype(complex).reshape(-1, 1, 1), len(q))


def weights(rep: LieAlgebraRep) -> np.ndarray:
    """Joint eigenvalues of the Cartan generators, one row per basis vector."""
    H = rep.cartan
    coeffs = np.array([1.0, np.pi / 7, np.e / 11, np.sqrt(2) / 13][: len(H)])
    M = np.einsum("n,nij->ij", coeffs, H)
    _, V = np.linalg.eigh(0.5 * (M + dagger(M)))
    W = np.einsum("ia,nij,ja->an", np.conj(V), H, V).real
    return W


def _weight_key(w, ndigits=6):
    return tuple(round(float(x), ndigits) + 0.0 for x in w)


def weight_multiset(rep: LieAlgebraRep) -> Counter:
    return Counter(_weight_key(w) for w in weights(rep))


_HW_FUNCTIONAL = np.array([1.0, 3.0])


def su3_decompose(product: LieAlgebraRep) -> Counter:
    """Irrep content of an su(3) representation by peeling off highest-weight modules."""
    if product.algebra != "su3":
        raise RepresentationError("su3_decompose needs an su(3) representation")
    remaining = weight_multiset(product)
    known = {lab: weight_multiset(su3_rep(lab)) for lab in SU3_LABELS}
    highest = {lab: max(ws, key=lambda w: float(np.dot(_HW_FUNCTIONAL, w))) for lab, ws in known.items()}
    out = Counter()
    while sum(remaining.values()) > 0:
        top = max((w for w, c in remaining.items() if c > 0), key=lambda w: float(np.dot(_HW_FUNCTIONAL, w)))
        lab = next((l for l, hw in highest.items() if np.allclose(hw, top, atol=1e-5)), None)
        if lab is None:
            raise RepresentationError(f"highest weight {top} is not one of {SU3_LABELS}")
        for w, c in known[lab].items():
            if remaining[w] < c:
                raise RepresentationError("weight multiset does not decompose into irreps")
            remaining[w] -= c
        out[lab] += 1
    return out


def identify_su3_irrep(rep: LieAlgebraRep) -> str:
    dec = su3_decompose(rep)
    if sum(dec.values()) != 1:
        raise RepresentationError(f"{rep.name} is reducible: {dict(dec)}")
    return next(iter(dec))


def irrep_multiplicity(target, product, tol: float = 1e-6) -> int:
    """Multiplicity of irrep ``target`` inside ``product``.

    Finite groups use characters; abelian algebras count matching weights;
    su(3) subtracts highest-weight modules.
    """
    if isinstance(target, FiniteGroupRep):
        return irrep_multiplicity_finite(target, product, tol)
    if product.algebra != target.algebra:
        raise RepresentationError("representations of different algebras")
    if target.abelian:
        if target.dim != 1:
            raise RepresentationError("abelian irreps are one dimensional")
        key = _weight_key(target.generators[:, 0, 0].real)
        return weight_multiset(product)[key]
    lab = target.name if target.name in SU3_LABELS else identify_su3_irrep(target)
    return su3_decompose(product)[lab]


def commutator(A, B):
    return A @ B - B @ A


def closure_residual(rep: LieAlgebraRep) -> float:
    """Largest distance of ``[T_m, T_n]`` from the span of the generators."""
    T = rep.generators
    n = T.shape[0]
    basis = T.reshape(n, -1).T
    worst = 0.0
    for a in range(n):
        for b in range(a + 1, n):
            c = commutator(T[a], T[b]).reshape(-1)
            coef, *_ = np.linalg.lstsq(basis, c, rcond=None)
            worst = max(worst, float(np.linalg.norm(basis @ coef - c)))
    return worst
