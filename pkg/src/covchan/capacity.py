"""Output entropies, Holevo quantities and one-shot capacities (in bits)."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from ._backend import kernels
from .channel import Channel, NotCPError, apply, classify
from .groups import FiniteGroupRep
from .linalg import as_matrix, eigvalsh, is_hermitian

NEG_EIG_TOL = 1e-10
DEFAULT_RESTARTS = 32
# restarts ending within this of the best value count as converged
CONVERGED_GAP = 1e-6


class CovarianceWarning(UserWarning):
    """The group average of the optimal output is not maximally mixed."""


def _entropy_bits(lam: np.ndarray) -> float:
    lam = lam[lam > 0]
    return float(-np.sum(lam * np.log2(lam)))


def von_neumann_entropy(rho) -> float:
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise ValueError("density matrix must be square")
    if not is_hermitian(rho):
        raise ValueError("density matrix is not Hermitian")
    if abs(np.trace(rho) - 1) > 1e-8:
        raise ValueError(f"density matrix has trace {np.trace(rho).real:.6g}, expected 1")
    lam = eigvalsh(rho)
    if lam[0] < -NEG_EIG_TOL:
        raise ValueError(f"density matrix has eigenvalue {lam[0]:.3g} < -{NEG_EIG_TOL:g}")
    return _entropy_bits(np.clip(lam, 0.0, None))


@dataclass(frozen=True, eq=False)
class Ensemble:
    states: Sequence[np.ndarray]
    probs: np.ndarray

    def __post_init__(self):
        states = [as_matrix(s) for s in self.states]
        p = np.asarray(self.probs, dtype=float).reshape(-1)
        if len(states) == 0 or len(states) != p.size:
            raise ValueError("need one probability per state")
        if np.any(p < 0) or abs(p.sum() - 1) > 1e-9:
            raise ValueError("probabilities must be nonnegative and sum to 1")
        d = states[0].shape[0]
        for s in states:
            if s.shape != (d, d):
                raise ValueError("ensemble states have different dimensions")
            if not is_hermitian(s) or abs(np.trace(s) - 1) > 1e-8 or eigvalsh(s)[0] < -NEG_EIG_TOL:
                raise ValueError("ensemble member is not a density matrix")
        object.__setattr__(self, "states", states)
        object.__setattr__(self, "probs", p)

    @property
    def d(self) -> int:
        return self.states[0].shape[0]

    @classmethod
    def from_vectors(cls, vectors, probs=None) -> "Ensemble":
        vs = [np.asarray(v, dtype=complex) / np.linalg.norm(v) for v in vectors]
        p = np.full(len(vs), 1 / len(vs)) if probs is None else probs
        return cls([np.outer(v, np.conj(v)) for v in vs], p)


def holevo_quantity(ch: Channel, ens: Ensemble) -> float:
    if ens.d != ch.d:
        raise ValueError(f"ensemble dimension {ens.d} does not match channel dimension {ch.d}")
    outs = [apply(ch, s) for s in ens.states]
    avg = sum(p * o for p, o in zip(ens.probs, outs))
    chi = von_neumann_entropy(avg) - sum(p * von_neumann_entropy(o) for p, o in zip(ens.probs, outs))
    return max(chi, 0.0) if chi > -1e-12 else chi


def angles_from_state(psi) -> np.ndarray:
    """Inverse of the kernels' ``pure_state``: angles for ``psi`` up to global phase."""
    psi = np.asarray(psi, dtype=complex).reshape(-1)
    psi = psi / np.linalg.norm(psi)
    d = psi.size
    if abs(psi[0]) > 0:
        psi = psi * np.exp(-1j * np.angle(psi[0]))
    r = np.abs(psi)
    x = np.zeros(2 * (d - 1))
    for k in range(d - 1):
        tail = np.linalg.norm(r[k:])
        x[k] = math.acos(min(1.0, r[k] / tail)) if tail > 0 else 0.0
    x[d - 1:] = np.angle(psi[1:])
    return x


def _random_start(d: int, rng: np.random.Generator) -> np.ndarray:
    v = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return angles_from_state(v)


def _require_cptp(ch: Channel):
    c = classify(ch)
    if not c.cp:
        raise NotCPError(f"channel is not CP (min Choi eigenvalue {c.min_choi_eigenvalue:.3g})")
    if not c.tp:
        raise ValueError(f"channel is not trace preserving (residual {c.tp_residual:.3g})")


@dataclass(frozen=True, eq=False)
class MinEntropyResult:
    s_min: float
    minimizer: np.ndarray
    restarts_converged: int
    values: np.ndarray = field(repr=False)


def min_output_entropy(ch: Channel, restarts: int = DEFAULT_RESTARTS, tol: float = 1e-14,
                       seed=None, check: bool = True) -> MinEntropyResult:
    """Minimum of ``S(E(|psi><psi|))`` over pure inputs.

    Each restart runs Nelder-Mead from a random pure state; the best point
    is then polished with a second, smaller simplex. ``check=False`` skips
    the CP/TP test (used for deliberately unphysical maps).
    """
    if restarts < 1:
        raise ValueError("restarts must be at least 1")
    if check:
        _require_cptp(ch)
    rng = np.random.default_rng(seed)
    K = np.ascontiguousarray(ch.kraus)
    w = np.ascontiguousarray(ch.weights, dtype=float)
    best_x, best_f = None, np.inf
    vals = np.empty(restarts)
    for r in range(restarts):
        x, f, _, _ = kernels.nelder_mead(K, w, _random_start(ch.d, rng), 0.5, 1e-10, tol)
        vals[r] = f
        if f < best_f:
            best_x, best_f = x, f
    x, f, _, _ = kernels.nelder_mead(K, w, best_x, 0.05, 1e-12, tol)
    if f < best_f:
        best_x, best_f = x, f
    psi = kernels.pure_state(best_x, ch.d)
    n_conv = int(np.sum(vals <= best_f + CONVERGED_GAP))
    return MinEntropyResult(max(best_f, 0.0), psi, n_conv, vals)


@dataclass(frozen=True, eq=False)
class CapacityReport:
    s_min: float
    minimizer: np.ndarray | None
    capacity: float
    method: str  # "optimizer" or "closed-form"
    restarts_converged: int
    group_average_residual: float | None = None


def group_average_check(ch: Channel, d1: FiniteGroupRep, d2: FiniteGroupRep, rho) -> float:
    """``|| (1/|G|) sum_g D2(g) E(rho) D2(g)^-1 - I/d ||`` (Frobenius)."""
    rho = as_matrix(rho)
    if d1.order != d2.order:
        raise ValueError("input and output representations belong to groups of different order")
    if d1.dim != ch.d or d2.dim != ch.d or rho.shape != (ch.d, ch.d):
        raise ValueError("dimension mismatch between channel, representations and state")
    out = apply(ch, rho)
    G = d2.elements
    avg = np.einsum("gij,jk,glk->il", G, out, np.conj(G)) / d2.order
    return float(np.linalg.norm(avg - np.eye(ch.d) / ch.d))


def covariant_capacity(ch: Channel, seed=None, restarts: int = DEFAULT_RESTARTS,
                       group: tuple[FiniteGroupRep, FiniteGroupRep] | FiniteGroupRep | None = None,
                       check: bool = True) -> CapacityReport:
    """``log2(d) - S_min``, valid when the output representation is irreducible.

    With ``group`` the averaging identity is evaluated at the minimizer and
    a :class:`CovarianceWarning` is issued if it fails.
    """
    res = min_output_entropy(ch, restarts=restarts, seed=seed, check=check)
    resid = None
    if group is not None:
        d1, d2 = (group, group) if isinstance(group, FiniteGroupRep) else group
        rho = np.outer(res.minimizer, np.conj(res.minimizer))
        resid = group_average_check(ch, d1, d2, rho)
        if resid > 1e-8:
            warnings.warn(f"group average of the optimal output differs from I/d by {resid:.3g}",
                          CovarianceWarning, stacklevel=2)
    return CapacityReport(res.s_min, res.minimizer, math.log2(ch.d) - res.s_min, "optimizer",
                          res.restarts_converged, resid)


def shannon_entropy(q) -> float:
    q = np.asarray(q, dtype=float)
    return _entropy_bits(q / q.sum())


def _xlog2(x: float) -> float:
    return 0.0 if x == 0 else x * math.log2(x)


def closed_form_capacity(family: str, params: Mapping, force: bool = False) -> float:
    """One-shot capacity from the known formulas for three families.

    ``symmetric-pauli`` takes coset weights ``q`` (or ``q0, q1, q2``),
    ``su3-8`` and ``su3-6`` take ``p``. Parameters outside the CP interval
    raise unless ``force`` is set.
    """
    if family == "symmetric-pauli":
        q = params.get("q")
        if q is None:
            q = [float(params.get(f"q{i}", 0.0)) for i in range(3)]
        q = np.asarray(q, dtype=float)
        if np.any(q < 0) or q.sum() <= 0:
            raise ValueError("coset weights must be nonnegative and not all zero")
        return math.log2(q.size) - shannon_entropy(q)
    if family not in ("su3-8", "su3-6"):
        raise ValueError(f"no closed form for family {family!r}")
    from .zoo import su3_family_cp_interval

    p = float(params["p"])
    lo, hi = su3_family_cp_interval(family)
    if not (lo - 1e-12 <= p <= hi + 1e-12) and not force:
        raise ValueError(f"p={p:g} lies outside the CP interval [{lo:g}, {hi:g}] of {family}")
    if family == "su3-8":
        if p < 0 or p > 1:
            raise ValueError(f"formula undefined at p={p:g}")
        return math.log2(3) + _xlog2(1 - p) + p * math.log2(p / 2) if p > 0 else math.log2(3)
    if p < 0 or p > 2:
        raise ValueError(f"formula undefined at p={p:g}")
    return math.log2(3) + _xlog2(p / 2) + _xlog2((2 - p) / 2) - (2 - p) / 2
