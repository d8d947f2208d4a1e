"""Named channel families with their trace-preservation constraints.

Each family is built from explicit Kraus matrices in the parameters the
family is usually written in. Constructors reject parameter sets that break
trace preservation and warn (:class:`CPWarning`) when the resulting map is
not completely positive; such maps are returned in signed Kraus form.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping, NamedTuple

import numpy as np
import scipy.optimize

from .channel import Channel, choi, kraus_gram, map_from_choi, min_choi_eigenvalue
from .groups import (
    LieAlgebraRep,
    clock,
    cyclic_rep,
    hadamard_group,
    pauli_group,
    pauli_op,
    pauli_subgroup,
    s3_reps,
    su3_rep,
    u1_phase_rep,
    u1u1_phase_rep,
)
from .linalg import dagger

TP_TOL = 1e-9
CP_TOL = 1e-9

FAMILY_NAMES = (
    "identity", "mixing", "transpose", "sod", "cyclicZ3", "hadamard3", "pauli",
    "symmetric-pauli", "s3-covariant", "s3-symmetric", "u1", "u1u1", "su3-8", "su3-6",
)


class ConstraintError(ValueError):
    """Parameters violate the trace-preservation constraint of a family."""

    def __init__(self, family: str, constraint: str, residual: float):
        self.family, self.constraint, self.residual = family, constraint, residual
        super().__init__(f"{family}: trace-preservation constraint violated ({constraint}); "
                         f"residual {residual:.3g}")


class CPWarning(UserWarning):
    """The constructed map is not completely positive."""


@dataclass(frozen=True)
class FamilySpec:
    name: str
    d: int = 3
    params: Mapping = field(default_factory=dict)

    def __post_init__(self):
        if self.name not in FAMILY_NAMES:
            raise ValueError(f"unknown family {self.name!r}; expected one of {', '.join(FAMILY_NAMES)}")
        if self.d < 2:
            raise ValueError("dimension must be at least 2")
        object.__setattr__(self, "params", dict(self.params))


class TPConstraint(NamedTuple):
    satisfied: bool
    residual: float
    description: str


# ---------------------------------------------------------------------------
# parameter handling
# ---------------------------------------------------------------------------


def _E(i: int, j: int, d: int = 3) -> np.ndarray:
    M = np.zeros((d, d), dtype=complex)
    M[i, j] = 1
    return M


def _num(params, key, default=None) -> complex:
    if key not in params:
        if default is None:
            raise ValueError(f"missing parameter {key!r}")
        return default
    v = params[key]
    if isinstance(v, (list, tuple)) and len(v) == 2:
        v = complex(v[0], v[1])
    return complex(v)


def _real(params, key, default=None) -> float:
    v = _num(params, key, default)
    if abs(v.imag) > 0:
        raise ValueError(f"parameter {key!r} must be real")
    return v.real


def _prob(params, key) -> float:
    p = _real(params, key, 0.0)
    if p < 0:
        raise ValueError(f"probability {key!r} must be nonnegative, got {p:g}")
    return p


def _check_keys(spec: FamilySpec, allowed):
    extra = set(spec.params) - set(allowed)
    if extra:
        raise ValueError(f"{spec.name}: unknown parameter(s) {', '.join(sorted(extra))}")


def _require_d3(spec: FamilySpec):
    if spec.d != 3:
        raise ValueError(f"{spec.name} is defined for qutrits only (d=3)")


def _gen(params) -> tuple[int, int]:
    g = str(params.get("gen", "01"))
    if len(g) != 2 or not g.isdigit() or g == "00":
        raise ValueError(f"symmetric-pauli generator must be two digits 'mn' other than '00', got {g!r}")
    return int(g[0]), int(g[1])


def _is_prime(n: int) -> bool:
    return n > 1 and all(n % k for k in range(2, int(n ** 0.5) + 1))


# ---------------------------------------------------------------------------
# Kraus constructions: each returns (kraus, signs or None)
# ---------------------------------------------------------------------------


def _k_identity(spec):
    return np.eye(spec.d)[None], None


def _k_mixing(spec):
    d = spec.d
    return np.array([_E(i, j, d) for i in range(d) for j in range(d)]) / np.sqrt(d), None


def _k_transpose(spec):
    d = spec.d
    return np.array([_E(i, j, d) + _E(j, i, d) for i in range(d) for j in range(d)]) / np.sqrt(2 * (d + 1)), None


def _sod_choi(spec) -> np.ndarray:
    d = spec.d
    a, b, g = (_real(spec.params, k) for k in ("alpha", "beta", "gamma"))
    phi = np.eye(d).reshape(-1)
    swap = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            swap[i * d + j, j * d + i] = 1
    return a * np.eye(d * d) + b * np.outer(phi, phi) + g * swap


def _k_sod(spec):
    ch = map_from_choi(_sod_choi(spec))
    return ch.kraus, ch.signs


def _cyclic_coeffs(params) -> np.ndarray:
    return np.array([[_num(params, f"a{n}{m}", 0j) for m in range(3)] for n in range(3)])


def _k_cyclicZ3(spec):
    a = _cyclic_coeffs(spec.params)
    K = np.zeros((3, 3, 3), dtype=complex)
    for k in range(3):
        for l in range(3):
            K[k, l, (l + k) % 3] = a[l, (l + k) % 3]
    return K, None


def hadamard_eigenvectors() -> dict:
    """Normalized eigenvectors of the qutrit Hadamard keyed by eigenvalue label."""
    r3 = np.sqrt(3)
    vecs = {"1": np.array([1 + r3, 1, 1]), "-1": np.array([1 - r3, 1, 1]), "i": np.array([0, -1, 1])}
    return {k: v.astype(complex) / np.linalg.norm(v) for k, v in vecs.items()}


def _hadamard_coeffs(params) -> np.ndarray:
    return np.array([[_num(params, f"a{t}{s}", 0j) for s in (1, 2, 3)] for t in (1, 2, 3)])


def _k_hadamard3(spec):
    e = hadamard_eigenvectors()
    e1, em, ei = e["1"], e["-1"], e["i"]
    a = _hadamard_coeffs(spec.params)  # a[t-1, s-1] = a_ts

    def ket_bra(x, y):
        return np.outer(x, np.conj(y))

    A1 = a[0, 0] * ket_bra(e1, e1) + a[1, 1] * ket_bra(em, em) + a[2, 2] * ket_bra(ei, ei)
    Am1 = a[1, 0] * ket_bra(e1, em) + a[0, 1] * ket_bra(em, e1)
    Ami = a[2, 0] * ket_bra(e1, ei) + a[1, 2] * ket_bra(ei, em)
    Ai = a[0, 2] * ket_bra(ei, e1) + a[2, 1] * ket_bra(em, ei)
    return np.array([A1, Am1, Ami, Ai]), None


def _pauli_probs(spec) -> np.ndarray:
    d = spec.d
    return np.array([[_prob(spec.params, f"p{m}{n}") for n in range(d)] for m in range(d)])


def _k_pauli(spec):
    d = spec.d
    p = _pauli_probs(spec)
    return np.array([np.sqrt(p[m, n]) * pauli_op(d, m, n) for m in range(d) for n in range(d)]), None


def symmetric_pauli_coset(d: int, gen: tuple[int, int], k: int, l: int) -> int:
    """Coset label of ``X_kl`` modulo the subgroup generated by ``X_mn``.

    For ``m = 0`` the label is ``k``; otherwise ``l - n m^-1 k (mod d)``.
    """
    m, n = gen
    if m % d == 0:
        return k % d
    return (l - n * pow(m, -1, d) * k) % d


def _coset_weights(spec) -> np.ndarray:
    q = np.array([_prob(spec.params, f"q{c}") for c in range(spec.d)])
    if q.sum() <= 0:
        raise ValueError("symmetric-pauli needs at least one positive coset weight")
    return q / q.sum()


def _k_symmetric_pauli(spec):
    d = spec.d
    if not _is_prime(d):
        raise ValueError("symmetric-pauli requires a prime dimension")
    gen = _gen(spec.params)
    q = _coset_weights(spec)
    K = [np.sqrt(q[symmetric_pauli_coset(d, gen, k, l)] / d) * pauli_op(d, k, l)
         for k in range(d) for l in range(d)]
    return np.array(K), None


def s3_covariant_kraus(a, b, c, d, e, f) -> np.ndarray:
    r3 = np.sqrt(3)
    A = np.array([[a, b, b], [b, a, b], [b, b, a]])
    B = np.array([[0, c, -c], [-c, 0, c], [c, -c, 0]])
    C1 = np.array([[d, -e - f, e], [-e - f, d, e], [f, f, -2 * d]])
    C2 = np.array([[3 * d, e - f, -e - 2 * f], [f - e, -3 * d, e + 2 * f], [-2 * e - f, 2 * e + f, 0]]) / r3
    return np.array([A, B, C1, C2], dtype=complex)


def _k_s3_covariant(spec):
    return s3_covariant_kraus(*(_num(spec.params, k) for k in "abcdef")), None


def s3_symmetric_kraus(a, b, c, d, e, f) -> np.ndarray:
    v = np.array([d, e, f], dtype=complex)
    A = np.outer([a, b, c], [1, 1, 1])
    C1 = np.outer(v, [1, 1, -2])
    C2 = np.sqrt(3) * np.outer(v, [1, -1, 0])
    return np.array([A, C1, C2], dtype=complex)


def _k_s3_symmetric(spec):
    return s3_symmetric_kraus(*(_num(spec.params, k) for k in "abcdef")), None


def u1_kraus(B, a, b, c, d, e) -> np.ndarray:
    A0 = np.zeros((3, 3), dtype=complex)
    A0[:2, :2] = B
    A0[2, 2] = a
    A1 = np.zeros((3, 3), dtype=complex)
    A1[2, :2] = b, c
    Am1 = np.zeros((3, 3), dtype=complex)
    Am1[:2, 2] = d, e
    return np.array([A0, A1, Am1])


def _u1_args(params):
    B = np.array([[_num(params, f"B{i}{j}") for j in range(2)] for i in range(2)])
    return (B, *(_num(params, k) for k in "abcde"))


def _k_u1(spec):
    return u1_kraus(*_u1_args(spec.params)), None


def _u1u1_params(params):
    a = [_num(params, f"a{j}") for j in range(3)]
    p = np.array([[0.0 if (i, j) == (0, 0) else _prob(params, f"p{i}{j}") for j in range(3)] for i in range(3)])
    return a, p


def _k_u1u1(spec):
    a, p = _u1u1_params(spec.params)
    K = [np.diag(a)]
    K += [np.sqrt(p[i, j]) * _E(i, j) for i in range(3) for j in range(3) if (i, j) != (0, 0)]
    return np.array(K, dtype=complex), None


def _octet_kraus() -> np.ndarray:
    """``E_ij - delta_ij I/3`` for all nine ordered pairs."""
    return np.array([_E(i, j) - (i == j) * np.eye(3) / 3 for i in range(3) for j in range(3)])


def _su3_8_weights(params) -> tuple[float, float]:
    """Weights ``(w_I, w_8)`` of ``rho`` and of ``sum A8 rho A8^dagger``."""
    if ("p" in params) == ("q" in params):
        raise ValueError("su3-8 takes exactly one of 'p' or 'q'")
    if "p" in params:
        p = _real(params, "p")
        return 1 - 4 * p / 3, p / 2
    q = _real(params, "q")
    return q, 3 * (1 - q) / 8


def _signed(blocks):
    K, s = [], []
    for w, ops in blocks:
        K.extend(np.sqrt(abs(w)) * ops)
        s.extend([-1.0 if w < 0 else 1.0] * len(ops))
    return np.array(K), np.array(s)


def _k_su3_8(spec):
    wI, w8 = _su3_8_weights(spec.params)
    return _signed([(wI, np.eye(3)[None]), (w8, _octet_kraus())])


def _k_su3_6(spec):
    p = _real(spec.params, "p")
    sym = [_E(i, i) for i in range(3)], [_E(i, j) + _E(j, i) for i in range(3) for j in range(i + 1, 3)]
    anti = [_E(i, j) - _E(j, i) for i in range(3) for j in range(i + 1, 3)]
    return _signed([(p / 2, np.array(sym[0])), (p / 4, np.array(sym[1])), ((1 - p) / 2, np.array(anti))])


# ---------------------------------------------------------------------------
# constraints
# ---------------------------------------------------------------------------


def _gram_residual(K, s=None) -> float:
    return float(np.linalg.norm(kraus_gram(Channel(K, s)) - np.eye(K.shape[1]), 2))


def _tp_cyclicZ3(spec):
    a = _cyclic_coeffs(spec.params)
    r = float(np.max(np.abs(np.sum(np.abs(a) ** 2, axis=0) - 1)))
    return r, "sum_n |a_nm|^2 = 1 for every m (columns of the coefficient matrix normalized)"


def _tp_hadamard3(spec):
    a = _hadamard_coeffs(spec.params)
    r = float(np.max(np.abs(np.sum(np.abs(a) ** 2, axis=1) - 1)))
    return r, "|(a_t1, a_t2, a_t3)| = 1 for t = 1, 2, 3"


def _tp_pauli(spec):
    return abs(float(_pauli_probs(spec).sum()) - 1), "sum_mn p_mn = 1"


def _tp_sod(spec):
    a, b, g = (_real(spec.params, k) for k in ("alpha", "beta", "gamma"))
    return abs(a * spec.d + b + g - 1), "alpha d + beta + gamma = 1"


def _tp_s3_covariant(spec):
    return _gram_residual(s3_covariant_kraus(*(_num(spec.params, k) for k in "abcdef"))), \
        "A^dag A + B^dag B + C1^dag C1 + C2^dag C2 = I"


def _tp_s3_symmetric(spec):
    a, b, c, d, e, f = (_num(spec.params, k) for k in "abcdef")
    r = max(abs(abs(a) ** 2 + abs(b) ** 2 + abs(c) ** 2 - 1 / 3),
            abs(abs(d) ** 2 + abs(e) ** 2 + abs(f) ** 2 - 1 / 6))
    return r, "|a|^2 + |b|^2 + |c|^2 = 1/3 and |d|^2 + |e|^2 + |f|^2 = 1/6"


def _tp_u1(spec):
    B, a, b, c, d, e = _u1_args(spec.params)
    bc = np.array([b, c])
    r1 = float(np.linalg.norm(dagger(B) @ B + np.outer(np.conj(bc), bc) - np.eye(2), 2))
    r2 = abs(abs(a) ** 2 + abs(d) ** 2 + abs(e) ** 2 - 1)
    return max(r1, r2), "B^dag B + (b, c)^dag (b, c) = I_2 and |a|^2 + |d|^2 + |e|^2 = 1"


def _tp_u1u1(spec):
    a, p = _u1u1_params(spec.params)
    r = float(np.max(np.abs(np.abs(np.array(a)) ** 2 + p.sum(axis=0) - 1)))
    return r, "|a_j|^2 + sum_i p_ij = 1 for j = 0, 1, 2"


def _tp_exact(spec):
    K, s = _BUILDERS[spec.name](spec)
    return _gram_residual(K, s), "sum_a A_a^dag A_a = I"


_BUILDERS: dict[str, Callable] = {
    "identity": _k_identity, "mixing": _k_mixing, "transpose": _k_transpose, "sod": _k_sod,
    "cyclicZ3": _k_cyclicZ3, "hadamard3": _k_hadamard3, "pauli": _k_pauli,
    "symmetric-pauli": _k_symmetric_pauli, "s3-covariant": _k_s3_covariant,
    "s3-symmetric": _k_s3_symmetric, "u1": _k_u1, "u1u1": _k_u1u1, "su3-8": _k_su3_8, "su3-6": _k_su3_6,
}

_CONSTRAINTS: dict[str, Callable] = {
    "cyclicZ3": _tp_cyclicZ3, "hadamard3": _tp_hadamard3, "pauli": _tp_pauli, "sod": _tp_sod,
    "s3-covariant": _tp_s3_covariant, "s3-symmetric": _tp_s3_symmetric, "u1": _tp_u1, "u1u1": _tp_u1u1,
}

_KEYS = {
    "identity": (), "mixing": (), "transpose": (), "sod": ("alpha", "beta", "gamma"),
    "cyclicZ3": tuple(f"a{n}{m}" for n in range(3) for m in range(3)),
    "hadamard3": tuple(f"a{t}{s}" for t in (1, 2, 3) for s in (1, 2, 3)),
    "s3-covariant": tuple("abcdef"), "s3-symmetric": tuple("abcdef"),
    "u1": ("B00", "B01", "B10", "B11", "a", "b", "c", "d", "e"),
    "u1u1": ("a0", "a1", "a2") + tuple(f"p{i}{j}" for i in range(3) for j in range(3) if (i, j) != (0, 0)),
    "su3-8": ("p", "q"), "su3-6": ("p",),
}

_QUTRIT_ONLY = {"cyclicZ3", "hadamard3", "s3-covariant", "s3-symmetric", "u1", "u1u1", "su3-8", "su3-6"}


def parameter_keys(name: str, d: int = 3) -> tuple[str, ...]:
    if name == "pauli":
        return tuple(f"p{m}{n}" for m in range(d) for n in range(d))
    if name == "symmetric-pauli":
        return ("gen",) + tuple(f"q{c}" for c in range(d))
    return _KEYS[name]


def _validate(spec: FamilySpec):
    if spec.name in _QUTRIT_ONLY:
        _require_d3(spec)
    _check_keys(spec, parameter_keys(spec.name, spec.d))


def family_tp_constraint(spec: FamilySpec) -> TPConstraint:
    _validate(spec)
    fn = _CONSTRAINTS.get(spec.name, _tp_exact)
    r, desc = fn(spec)
    return TPConstraint(r <= TP_TOL, float(r), desc)


def make_family(spec: FamilySpec) -> Channel:
    tp = family_tp_constraint(spec)
    if not tp.satisfied:
        raise ConstraintError(spec.name, tp.description, tp.residual)
    K, s = _BUILDERS[spec.name](spec)
    ch = Channel(K, s, label=spec.name)
    lam = min_choi_eigenvalue(ch)
    cp = lam >= -CP_TOL
    if not cp:
        warnings.warn(f"{spec.name} with {spec.params} is not completely positive "
                      f"(min Choi eigenvalue {lam:.3g})", CPWarning, stacklevel=2)
    return ch.with_meta(family=spec.name, params=dict(spec.params), cp=bool(cp), tp=True,
                        min_choi_eigenvalue=lam)


def family(name: str, /, dim: int = 3, **params) -> Channel:
    """Shorthand for ``make_family(FamilySpec(name, dim, params))``."""
    return make_family(FamilySpec(name, dim, params))


# ---------------------------------------------------------------------------
# su(3) families: CP interval
# ---------------------------------------------------------------------------


def _su3_min_eig(name: str, p: float) -> float:
    K, s = _BUILDERS[name](FamilySpec(name, 3, {"p": p}))
    return float(np.linalg.eigvalsh(choi(Channel(K, s)))[0])


@lru_cache(maxsize=None)
def su3_family_cp_interval(name: str) -> tuple[float, float]:
    """Largest interval around ``p = 0`` on which the family's Choi matrix is PSD.

    Each endpoint is the root of the minimum Choi eigenvalue, bracketed on a
    coarse grid and refined by bisection to 1e-8.
    """
    if name not in ("su3-8", "su3-6"):
        raise ValueError(f"CP interval is only computed for su3-8 and su3-6, not {name!r}")

    def f(p):
        return _su3_min_eig(name, p)

    grid = np.linspace(-2.0, 2.0, 401)
    p0 = grid[int(np.argmax([f(p) for p in grid]))]
    if f(p0) < 0:
        return (np.nan, np.nan)

    def edge(direction):
        inside = p0
        while True:
            outside = inside + 0.05 * direction
            if f(outside) < 0:
                break
            inside = outside
        a, b = sorted((inside, outside))
        return scipy.optimize.bisect(f, a, b, xtol=1e-10)

    lo, hi = edge(-1.0), edge(1.0)
    return round(lo, 8) + 0.0, round(hi, 8) + 0.0


# ---------------------------------------------------------------------------
# declared symmetries
# ---------------------------------------------------------------------------


class DeclaredSymmetry(NamedTuple):
    kind: str  # "covariant" or "symmetric"
    group: str
    d1: object
    d2: object


def so_rep(d: int) -> LieAlgebraRep:
    """Real rotations: generators ``i(E_jk - E_kj)`` for ``j < k``."""
    gens = [1j * (_E(j, k, d) - _E(k, j, d)) for j in range(d) for k in range(j + 1, d)]
    return LieAlgebraRep(f"so{d}", f"so{d}", np.array(gens), 1)


def declared_symmetries(name: str, d: int = 3, params: Mapping | None = None) -> list[DeclaredSymmetry]:
    """Group actions a family member is covariant or symmetric under by construction."""
    params = params or {}
    if name == "identity":
        return [DeclaredSymmetry("covariant", "su3", su3_rep("3"), su3_rep("3"))] if d == 3 else \
            [DeclaredSymmetry("covariant", "pauli", pauli_group(d), pauli_group(d))]
    if name == "mixing":
        if d == 3:
            return [DeclaredSymmetry("covariant", "su3", su3_rep("3"), su3_rep("3bar"))]
        return [DeclaredSymmetry("covariant", "pauli", pauli_group(d), pauli_group(d))]
    if name == "transpose":
        if d == 3:
            return [DeclaredSymmetry("covariant", "su3", su3_rep("3"), su3_rep("3bar"))]
        so = so_rep(d)
        return [DeclaredSymmetry("covariant", f"so{d}", so, so)]
    if name == "sod":
        so = so_rep(d)
        return [DeclaredSymmetry("covariant", f"so{d}", so, so)]
    if name == "cyclicZ3":
        z = cyclic_rep(3, clock(3), name="<Z>")
        return [DeclaredSymmetry("covariant", "z3", z, z)]
    if name == "hadamard3":
        h = hadamard_group(3)
        return [DeclaredSymmetry("covariant", "hadamard", h, h)]
    if name == "pauli":
        P = pauli_group(d)
        return [DeclaredSymmetry("covariant", "pauli", P, P)]
    if name == "symmetric-pauli":
        P = pauli_group(d)
        m, n = _gen(params)
        H = pauli_subgroup(d, m, n)
        return [DeclaredSymmetry("covariant", "pauli", P, P), DeclaredSymmetry("symmetric", f"pauli:{m}{n}", H, H)]
    if name == "s3-covariant":
        S = s3_reps().defining
        return [DeclaredSymmetry("covariant", "s3", S, S)]
    if name == "s3-symmetric":
        S = s3_reps().defining
        return [DeclaredSymmetry("symmetric", "s3", S, S)]
    if name == "u1":
        r = u1_phase_rep()
        return [DeclaredSymmetry("covariant", "u1", r, r)]
    if name == "u1u1":
        r = u1u1_phase_rep()
        return [DeclaredSymmetry("covariant", "u1u1", r, r)]
    if name == "su3-8":
        return [DeclaredSymmetry("covariant", "su3", su3_rep("3"), su3_rep("3")),
                DeclaredSymmetry("covariant", "su3", su3_rep("3bar"), su3_rep("3bar"))]
    if name == "su3-6":
        return [DeclaredSymmetry("covariant", "su3", su3_rep("3"), su3_rep("3bar")),
                DeclaredSymmetry("covariant", "su3", su3_rep("3bar"), su3_rep("3"))]
    raise ValueError(f"unknown family {name!r}")

