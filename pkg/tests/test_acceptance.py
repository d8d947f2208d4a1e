"""One PASS/FAIL line per acceptance criterion (run with ``-s`` to see them)."""
import math
import time
from contextlib import contextmanager

import numpy as np
import pytest

from covchan.basis import coherence_vector, gell_mann_basis
from covchan.capacity import closed_form_capacity, covariant_capacity, shannon_entropy
from covchan.channel import (
    Channel,
    affine_rep,
    apply,
    apply_affine,
    choi,
    choi_distance,
    classify,
    convex_combine,
    identity_channel,
    kraus_from_choi,
    kraus_gram,
    map_from_choi,
    min_choi_eigenvalue,
    mix_kraus,
    transpose_channel,
)
from covchan.covariance import (
    check_covariance,
    check_symmetry,
    completeness,
    normalize_tp,
    solution_channel,
    solve_intertwiners_finite,
    solve_intertwiners_lie,
    solve_symmetric_finite,
)
from covchan.groups import (
    HADAMARD_IRREPS,
    SU3_LABELS,
    abelian_irrep,
    clock,
    cyclic_irrep,
    cyclic_rep,
    hadamard,
    hadamard_group,
    hadamard_irrep,
    pauli_group,
    pauli_op,
    pauli_subgroup,
    s3_reps,
    su3_rep,
    u1_phase_rep,
    u1u1_phase_rep,
)
from covchan.linalg import kron, random_density, random_unitary, vectorize
from covchan.zoo import FAMILY_NAMES, declared_symmetries, family, su3_family_cp_interval

from helpers import (
    hadamard_params,
    cyclic_params,
    s3_covariant_params,
    s3_symmetric_params,
    u1_params,
    u1u1_params,
    valid_params,
)


@contextmanager
def criterion(n, what):
    """Print a PASS/FAIL line whatever happens inside the block."""
    try:
        yield
    except BaseException as exc:
        print(f"\n[FAIL] criterion {n}: {what} ({type(exc).__name__}: {exc})")
        raise
    print(f"\n[PASS] criterion {n}: {what}")


def rand_matrix(rng, d=3):
    return rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))


def random_channel(rng, d=3, k=3):
    V = np.linalg.qr(rng.standard_normal((k * d, d)) + 1j * rng.standard_normal((k * d, d)))[0]
    return Channel(V.reshape(k, d, d))


# su(3) pairings (D1, D2) -> irreps occurring in D1 (x) conj(D2)
SU3_TABLE = {("3", "3"): {"1", "8"}, ("3", "3bar"): {"6", "3bar"},
             ("3bar", "3"): {"6bar", "3"}, ("3bar", "3bar"): {"1", "8"}}


def test_criterion_1_intertwiner_counts():
    with criterion(1, "intertwiner dimensions and completeness"):
        t0 = time.perf_counter()
        Z = cyclic_rep(3, clock(3))
        sols = [solve_intertwiners_finite(Z, Z, cyclic_irrep(Z, k)) for k in range(3)]
        assert [s.multiplicity for s in sols] == [3, 3, 3]
        for k, s in enumerate(sols):
            mask = np.zeros((3, 3), bool)
            mask[np.arange(3), (np.arange(3) + k) % 3] = True
            assert np.abs(s.kraus_multiplets[:, 0][:, ~mask]).max() < 1e-12
        assert completeness(sols) == 9

        H = hadamard_group(3)
        sols = [solve_intertwiners_finite(H, H, hadamard_irrep(H, mu)) for mu in ("1", "i", "-1", "-i")]
        assert [s.multiplicity for s in sols] == [3, 2, 2, 2]
        assert completeness(sols) == 9

        S = s3_reps()
        sols = [solve_intertwiners_finite(S.defining, S.defining, S.irreps[k]) for k in ("1", "1'", "2")]
        assert [s.multiplicity for s in sols] == [2, 1, 3]
        assert completeness(sols) == 9

        for (a, b), expected in SU3_TABLE.items():
            sols = {w: solve_intertwiners_lie(su3_rep(a), su3_rep(b), su3_rep(w)) for w in SU3_LABELS}
            for w, s in sols.items():
                assert s.multiplicity == (1 if w in expected else 0), (a, b, w)
            assert completeness(list(sols.values())) == 9
        elapsed = time.perf_counter() - t0
        assert elapsed < 5, elapsed


def _rebuild(pairs):
    """Project each family multiplet onto its solver space and rebuild it."""
    ops, worst = [], 0.0
    for sol, multiplet in pairs:
        c, outside = sol.coordinates(multiplet)
        worst = max(worst, outside)
        ops.extend(sol.multiplet(c))
    return Channel(np.array(ops)), worst


def test_criterion_2_solver_matches_family_kraus():
    with criterion(2, "family Kraus sets equal solver channels (Choi distance <= 1e-9)"):
        rng = np.random.default_rng(20)
        checks = {}

        Z = cyclic_rep(3, clock(3))
        for _ in range(3):
            ch = family("cyclicZ3", **cyclic_params(rng))
            pairs = [(solve_intertwiners_finite(Z, Z, cyclic_irrep(Z, k)), ch.kraus[k]) for k in range(3)]
            checks.setdefault("cyclicZ3", []).append((ch, *_rebuild(pairs)))

        H = hadamard_group(3)
        # the third operator lies in the mu = i sector, the fourth in mu = -i
        labels = ("1", "-1", "i", "-i")
        for _ in range(3):
            ch = family("hadamard3", **hadamard_params(rng))
            pairs = [(solve_intertwiners_finite(H, H, hadamard_irrep(H, mu)), K) for mu, K in zip(labels, ch.kraus)]
            checks.setdefault("hadamard3", []).append((ch, *_rebuild(pairs)))

        S = s3_reps()
        sol = {k: solve_intertwiners_finite(S.defining, S.defining, S.irreps[k]) for k in ("1", "1'", "2")}
        sym = {k: solve_symmetric_finite(S.defining, S.irreps[k]) for k in ("1", "2")}
        for _ in range(3):
            ch = family("s3-covariant", **s3_covariant_params(rng))
            K = ch.kraus
            pairs = [(sol["1"], K[0]), (sol["1'"], K[1]), (sol["2"], K[2:4])]
            checks.setdefault("s3-covariant", []).append((ch, *_rebuild(pairs)))
            ch = family("s3-symmetric", **s3_symmetric_params(rng))
            K = ch.kraus
            pairs = [(sym["1"], K[0]), (sym["2"], K[1:3])]
            checks.setdefault("s3-symmetric", []).append((ch, *_rebuild(pairs)))

        r = u1_phase_rep()
        u1 = {q: solve_intertwiners_lie(r, r, abelian_irrep("u1", q)) for q in (-1, 0, 1)}
        for _ in range(3):
            ch = family("u1", **u1_params(rng))
            # the block (b, c) in the last row lowers the charge
            pairs = [(u1[0], ch.kraus[0]), (u1[-1], ch.kraus[1]), (u1[1], ch.kraus[2])]
            checks.setdefault("u1", []).append((ch, *_rebuild(pairs)))

        r2 = u1u1_phase_rep()
        w = [(0, 0), (1, 0), (0, 1)]
        for _ in range(3):
            ch = family("u1u1", **u1u1_params(rng))
            pairs = []
            for K in ch.kraus:
                i, j = np.argwhere(np.abs(K) > 0)[-1]
                q = (0, 0) if i == j else (w[j][0] - w[i][0], w[j][1] - w[i][1])
                pairs.append((solve_intertwiners_lie(r2, r2, abelian_irrep("u1u1", q)), K))
            checks.setdefault("u1u1", []).append((ch, *_rebuild(pairs)))

        r3, r3b = su3_rep("3"), su3_rep("3bar")
        e6 = solution_channel(solve_intertwiners_lie(r3, r3b, su3_rep("6")))
        e3b = solution_channel(solve_intertwiners_lie(r3, r3b, su3_rep("3bar")))
        for p in np.linspace(0, 1, 6):
            ch = family("su3-6", p=p)
            checks.setdefault("su3-6", []).append((ch, convex_combine([e6, e3b], [p, 1 - p]), 0.0))

        for name, rows in checks.items():
            for fam_ch, rebuilt, outside in rows:
                assert outside < 1e-9, (name, outside)
                assert choi_distance(fam_ch, rebuilt) <= 1e-9, name


def test_criterion_3_su3_closed_forms():
    with criterion(3, "su(3) closed forms and the naive octet map"):
        r3, r3b = su3_rep("3"), su3_rep("3bar")
        rng = np.random.default_rng(30)
        cases = [
            ((r3, r3b, "6"), lambda X: (np.trace(X) * np.eye(3) + X.T) / 4),
            ((r3, r3b, "3bar"), lambda X: (np.trace(X) * np.eye(3) - X.T) / 2),
            ((r3, r3, "8"), lambda X: (3 * np.trace(X) * np.eye(3) - X) / 8),
        ]
        for (a, b, w), formula in cases:
            sol = solve_intertwiners_lie(a, b, su3_rep(w))
            ch = normalize_tp(sol.kraus_multiplets[0])
            for _ in range(10):
                X = rand_matrix(rng)
                assert np.abs(apply(ch, X) - formula(X)).max() <= 1e-10, w

        # naive octet Kraus set (E_ij - delta_ij I/3)/sqrt(2): not TP, and its
        # candidate image (tr(rho) I - rho)/2 is not CP
        naive = np.array([(np.eye(3)[:, [i]] @ np.eye(3)[[j]] - (i == j) * np.eye(3) / 3) / np.sqrt(2)
                            for i in range(3) for j in range(3)])
        gram = np.linalg.eigvalsh(kraus_gram(Channel(naive)))
        assert np.allclose(gram, 4 / 3, atol=1e-12)
        rhs = map_from_choi(0.5 * (np.eye(9) - np.outer(np.eye(3).reshape(-1), np.eye(3).reshape(-1))))
        assert min_choi_eigenvalue(rhs) < -0.9


def test_criterion_4_cp_intervals():
    with criterion(4, "CP intervals of the su(3) families"):
        lo, hi = su3_family_cp_interval("su3-8")
        assert abs(lo - 0) <= 1e-6 and abs(hi - 0.75) <= 1e-6
        for p in np.linspace(0, 1, 21):
            assert min_choi_eigenvalue(family("su3-6", p=p)) >= -1e-10
        lo6, hi6 = su3_family_cp_interval("su3-6")
        assert lo6 <= 1e-6 and hi6 >= 1 - 1e-6


def test_criterion_5_capacity_cross_checks():
    with criterion(5, "optimizer capacities match closed forms"):
        t0 = time.perf_counter()
        worst = 0.0
        for p in np.round(np.linspace(0, 1, 11), 12):
            rep = covariant_capacity(family("su3-6", p=p), seed=0)
            worst = max(worst, abs(rep.capacity - closed_form_capacity("su3-6", {"p": p})))
        assert abs(covariant_capacity(family("su3-6", p=1.0), seed=0).capacity - (math.log2(3) - 1.5)) <= 1e-6
        for p in np.round(np.linspace(0, 0.7, 8), 12):
            rep = covariant_capacity(family("su3-8", p=p), seed=0)
            worst = max(worst, abs(rep.capacity - closed_form_capacity("su3-8", {"p": p})))
        assert worst <= 1e-6, worst

        rng = np.random.default_rng(50)
        gens = ["01", "10", "11"]
        for t in range(20):
            gen = gens[t % 3]
            q = rng.dirichlet(np.ones(3))
            ch = family("symmetric-pauli", gen=gen, q0=q[0], q1=q[1], q2=q[2])
            rep = covariant_capacity(ch, seed=t)
            assert abs(rep.capacity - (math.log2(3) - shannon_entropy(q))) <= 1e-6
            _, vecs = np.linalg.eig(pauli_op(3, int(gen[0]), int(gen[1])))
            vecs /= np.linalg.norm(vecs, axis=0)
            fid = np.max(np.abs(np.conj(vecs).T @ rep.minimizer) ** 2)
            assert fid >= 1 - 1e-6, (gen, q, fid)
        elapsed = time.perf_counter() - t0
        assert elapsed < 60, elapsed


def test_criterion_6_covariance_certification():
    with criterion(6, "every family passes its declared symmetry; negative controls fail"):
        rng = np.random.default_rng(60)
        for name in FAMILY_NAMES:
            params = valid_params(name, rng)
            ch = family(name, **params)
            decl = declared_symmetries(name, 3, params)
            assert decl, name
            for ds in decl:
                if ds.kind == "covariant":
                    r = check_covariance(ch, ds.d1, ds.d2, n_states=25, seed=int(rng.integers(2**31)))
                    assert r.covariant and r.max_residual <= 1e-9, (name, ds.group, r.max_residual)
                else:
                    r = check_symmetry(ch, ds.d1, n_states=25, seed=int(rng.integers(2**31)))
                    assert r.symmetric and r.max_residual <= 1e-9, (name, ds.group, r.max_residual)
        bad = check_covariance(identity_channel(3), su3_rep("3"), su3_rep("3bar"))
        assert not bad.covariant and bad.max_residual >= 1e-3
        p = rng.dirichlet(np.ones(9))
        generic = family("pauli", **{f"p{m}{n}": p[3 * m + n] for m in range(3) for n in range(3)})
        bad = check_symmetry(generic, pauli_subgroup(3, 0, 1))
        assert not bad.symmetric and bad.max_residual >= 1e-3


def test_criterion_7_structural_properties():
    with criterion(7, "structural property suite"):
        rng = np.random.default_rng(70)
        I = np.eye(3)
        for _ in range(100):
            A, B = rand_matrix(rng), rand_matrix(rng)
            assert np.abs(vectorize(A @ B) - kron(A, I) @ vectorize(B)).max() <= 1e-12
            assert np.abs(vectorize(A @ B) - kron(I, B.T) @ vectorize(A)).max() <= 1e-12

        basis = gell_mann_basis(3)
        G = basis.gammas
        gram = np.einsum("mji,nji->mn", np.conj(G), G)
        assert np.abs(gram - np.eye(9)).max() <= 1e-12

        ch = random_channel(rng)
        ar = affine_rep(ch, basis)
        for _ in range(100):
            rho = random_density(3, rng)
            out = apply_affine(ar, coherence_vector(rho, basis)).components
            assert np.abs(out - coherence_vector(apply(ch, rho), basis).components).max() <= 1e-10

        non_tp = Channel(np.array([np.diag([1.0, 0.5, 0.2])]))
        for c in (ch, identity_channel(3), transpose_channel(3), family("su3-6", p=0.3), non_tp):
            flags = classify(c)
            a = affine_rep(c, basis)
            assert (np.abs(a.row0).max() <= 1e-10) == flags.tp
            assert (np.abs(a.col0).max() <= 1e-10) == flags.unital

        for _ in range(10):
            c = random_channel(rng, k=int(rng.integers(1, 5)))
            assert choi_distance(c, kraus_from_choi(choi(c))) <= 1e-10

        c = random_channel(rng, k=4)
        for _ in range(20):
            assert choi_distance(c, mix_kraus(c, random_unitary(4, rng))) <= 1e-10

        P = pauli_group(3).elements
        for _ in range(10):
            rho = random_density(3, rng)
            twirl = np.einsum("gij,jk,glk->il", P, rho, np.conj(P)) / len(P)
            assert np.abs(twirl - np.eye(3) / 3).max() <= 1e-10


def test_criterion_8_hadamard_facts():
    with criterion(8, "qutrit Hadamard traces and spectrum"):
        H = hadamard(3)
        assert abs(np.trace(H) - 1j) <= 1e-12
        assert abs(np.trace(H @ H) - 1) <= 1e-12
        ev = np.sort_complex(np.round(np.linalg.eigvals(H), 12))
        assert np.allclose(ev, np.sort_complex(np.array([1, -1, 1j])), atol=1e-12)
