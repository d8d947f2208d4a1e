import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covchan.capacity import (
    CovarianceWarning,
    Ensemble,
    angles_from_state,
    closed_form_capacity,
    covariant_capacity,
    group_average_check,
    holevo_quantity,
    min_output_entropy,
    shannon_entropy,
    von_neumann_entropy,
)
from covchan.channel import NotCPError, identity_channel
from covchan.groups import generate_group, pauli_group, s3_reps
from covchan.linalg import random_density, random_pure
from covchan.zoo import family
from covchan import _backend

from helpers import s3_covariant_params

LOG3 = math.log2(3)


def test_entropy_examples():
    assert von_neumann_entropy(np.diag([1.0, 0, 0])) == 0
    assert math.isclose(von_neumann_entropy(np.eye(3) / 3), LOG3, abs_tol=1e-12)
    assert math.isclose(von_neumann_entropy(np.diag([0.5, 0.25, 0.25])), 1.5, abs_tol=1e-12)


def test_entropy_clamps_tiny_negative_and_rejects_large():
    assert von_neumann_entropy(np.diag([1 + 1e-13, -1e-13, 0])) == pytest.approx(0, abs=1e-11)
    with pytest.raises(ValueError):
        von_neumann_entropy(np.diag([1.1, -0.1, 0]))
    with pytest.raises(ValueError):
        von_neumann_entropy(np.eye(3))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_entropy_concavity(seed):
    rng = np.random.default_rng(seed)
    states = [random_density(3, rng, rank=int(rng.integers(1, 4))) for _ in range(4)]
    p = rng.random(4)
    p /= p.sum()
    mix = sum(pi * s for pi, s in zip(p, states))
    assert von_neumann_entropy(mix) >= sum(pi * von_neumann_entropy(s) for pi, s in zip(p, states)) - 1e-12


def test_holevo_examples():
    I = identity_channel(3)
    basis = Ensemble.from_vectors(np.eye(3))
    assert math.isclose(holevo_quantity(I, basis), LOG3, abs_tol=1e-12)
    single = Ensemble([random_density(3, np.random.default_rng(0))], [1.0])
    assert holevo_quantity(family("su3-6", p=0.4), single) == pytest.approx(0, abs=1e-12)
    for p in (0.1, 0.5, 0.7):
        expect = LOG3 + (1 - p) * math.log2(1 - p) + p * math.log2(p / 2)
        assert holevo_quantity(family("su3-8", p=p), basis) == pytest.approx(expect, abs=1e-12)


def test_ensemble_validation():
    with pytest.raises(ValueError):
        Ensemble([np.eye(3) / 3], [0.5])
    with pytest.raises(ValueError):
        Ensemble([np.eye(3)], [1.0])
    with pytest.raises(ValueError):
        holevo_quantity(identity_channel(2), Ensemble.from_vectors(np.eye(3)))


def test_angles_round_trip():
    rng = np.random.default_rng(1)
    for d in (2, 3, 4):
        psi = random_pure(d, rng)
        back = _backend.kernels.pure_state(angles_from_state(psi), d)
        assert abs(abs(np.vdot(back, psi)) - 1) < 1e-12


def test_identity_min_entropy_zero():
    res = min_output_entropy(identity_channel(3), restarts=2, seed=0)
    assert res.s_min < 1e-10


def test_transitive_channel_flat_entropy():
    res = min_output_entropy(family("su3-8", p=0.5), restarts=4, seed=0)
    assert res.s_min == pytest.approx(1.5, abs=1e-9)
    assert np.allclose(res.values, 1.5, atol=1e-9)


def test_optimizer_deterministic_given_seed():
    ch = family("symmetric-pauli", gen="11", q0=0.6, q1=0.3, q2=0.1)
    a = min_output_entropy(ch, restarts=4, seed=7)
    b = min_output_entropy(ch, restarts=4, seed=7)
    assert a.s_min == b.s_min and np.array_equal(a.minimizer, b.minimizer)


def test_min_entropy_requires_cptp():
    with pytest.warns(UserWarning):
        ch = family("su3-8", p=0.9)
    with pytest.raises(NotCPError):
        min_output_entropy(ch)
    with pytest.raises(ValueError):
        min_output_entropy(identity_channel(3), restarts=0)


def test_covariant_capacity_examples():
    assert covariant_capacity(identity_channel(3), seed=0, restarts=2).capacity == pytest.approx(LOG3, abs=1e-9)
    r = covariant_capacity(family("su3-6", p=1.0), seed=0)
    assert r.capacity == pytest.approx(LOG3 - 1.5, abs=1e-9)
    assert r.capacity == pytest.approx(0.08496, abs=1e-5)
    assert r.capacity == pytest.approx(math.log2(3) - r.s_min, abs=1e-12)
    u = covariant_capacity(family("symmetric-pauli", gen="01", q0=1, q1=1, q2=1), seed=0, restarts=4)
    assert u.capacity == pytest.approx(0, abs=1e-9)


def test_optimal_ensemble_attains_capacity():
    ch = family("symmetric-pauli", gen="10", q0=0.7, q1=0.2, q2=0.1)
    P = pauli_group(3)
    rep = covariant_capacity(ch, seed=3, group=P)
    assert rep.group_average_residual < 1e-10
    orbit = [U @ rep.minimizer for U in P.elements]
    assert holevo_quantity(ch, Ensemble.from_vectors(orbit)) == pytest.approx(rep.capacity, abs=1e-6)


def test_group_average_examples():
    rng = np.random.default_rng(4)
    P = pauli_group(3)
    p = rng.random(9)
    p /= p.sum()
    ch = family("pauli", **{f"p{m}{n}": p[3 * m + n] for m in range(3) for n in range(3)})
    assert group_average_check(ch, P, P, random_density(3, rng)) <= 1e-10
    trivial = generate_group("1", [np.eye(3)])
    rho0 = np.diag([1.0, 0, 0])
    assert group_average_check(identity_channel(3), trivial, trivial, rho0) > 0.1
    S = s3_reps().defining
    s3ch = family("s3-covariant", **s3_covariant_params(rng))
    assert group_average_check(s3ch, S, S, np.eye(3) / 3) <= 1e-10 or \
        group_average_check(s3ch, S, S, np.eye(3) / 3) == pytest.approx(
            np.linalg.norm(s3ch(np.eye(3) / 3) - np.eye(3) / 3), abs=1e-12)


def test_reducible_group_warns():
    S = s3_reps().defining
    with pytest.warns(CovarianceWarning):
        covariant_capacity(identity_channel(3), seed=0, restarts=2, group=S)


def test_closed_forms():
    assert closed_form_capacity("symmetric-pauli", {"q0": 1}) == pytest.approx(LOG3)
    assert closed_form_capacity("su3-8", {"p": 0.75}) == pytest.approx(
        LOG3 - (0.25 * 2 + 0.75 * math.log2(8 / 3)), abs=1e-12)
    assert closed_form_capacity("su3-8", {"p": 0.75}) == pytest.approx(0.0236, abs=1e-4)
    assert closed_form_capacity("su3-6", {"p": 2 / 3}) == pytest.approx(0, abs=1e-12)
    assert closed_form_capacity("su3-6", {"p": 1}) == pytest.approx(LOG3 - 1.5, abs=1e-12)
    with pytest.raises(ValueError):
        closed_form_capacity("su3-8", {"p": 0.9})
    assert closed_form_capacity("su3-8", {"p": 0.9}, force=True) == pytest.approx(
        LOG3 + 0.1 * math.log2(0.1) + 0.9 * math.log2(0.45))
    with pytest.raises(ValueError):
        closed_form_capacity("pauli", {})
    assert shannon_entropy([1, 1, 1, 1]) == pytest.approx(2)
