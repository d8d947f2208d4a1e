import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from covchan import _backend, _pykernels
from covchan.channel import choi
from covchan.zoo import family

ckernels = _backend.compiled_kernels
needs_ext = pytest.mark.skipif(ckernels is None, reason="compiled extension not built")

CHANNELS = [
    family("su3-6", p=0.3),
    family("su3-8", p=0.5),
    family("symmetric-pauli", gen="11", q0=0.6, q1=0.3, q2=0.1),
]


def test_backend_selected():
    assert _backend.BACKEND in ("cython", "python")
    if ckernels is not None:
        assert _backend.BACKEND == "cython" or _backend.kernels is _pykernels


def test_pure_state_normalized_first_component_real():
    rng = np.random.default_rng(0)
    for d in (2, 3, 5):
        psi = _pykernels.pure_state(rng.uniform(-3, 3, 2 * (d - 1)), d)
        assert np.isclose(np.linalg.norm(psi), 1)
        assert abs(psi[0].imag) < 1e-15


def test_python_entropy_matches_direct():
    ch = CHANNELS[0]
    x = np.array([0.3, 1.0, 0.4, -1.2])
    psi = _pykernels.pure_state(x, 3)
    out = ch(np.outer(psi, psi.conj()))
    lam = np.clip(np.linalg.eigvalsh(out), 0, None)
    lam = lam[lam > 0]
    assert _pykernels.output_entropy(ch.kraus, ch.weights, x) == pytest.approx(-np.sum(lam * np.log2(lam)), abs=1e-13)


@needs_ext
@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(range(len(CHANNELS))))
def test_backends_agree_on_entropy(seed, k):
    ch = CHANNELS[k]
    x = np.random.default_rng(seed).uniform(-np.pi, np.pi, 4)
    assert np.allclose(ckernels.pure_state(x, 3), _pykernels.pure_state(x, 3))
    a = ckernels.output_entropy(ch.kraus, ch.weights, x)
    b = _pykernels.output_entropy(ch.kraus, ch.weights, x)
    assert a == pytest.approx(b, abs=1e-12)


@needs_ext
@pytest.mark.parametrize("k", range(len(CHANNELS)))
def test_backends_reach_same_minimum(k):
    ch = CHANNELS[k]
    x0 = np.array([0.7, 0.4, 1.0, -0.5])
    xa, fa, _, _ = ckernels.nelder_mead(ch.kraus, ch.weights, x0)
    xb, fb, _, _ = _pykernels.nelder_mead(ch.kraus, ch.weights, x0)
    assert fa == pytest.approx(fb, abs=1e-9)


def test_signed_weights_supported():
    with pytest.warns(UserWarning):
        ch = family("su3-8", p=0.9)
    assert np.allclose(choi(ch), choi(ch).conj().T)
    x = np.array([0.1, 0.2, 0.3, 0.4])
    v = _backend.kernels.output_entropy(ch.kraus, ch.weights, x)
    assert np.isfinite(v)


def test_nelder_mead_iteration_cap():
    ch = CHANNELS[2]
    x, f, nit, nfev = _pykernels.nelder_mead(ch.kraus, ch.weights, np.zeros(4), maxiter=3)
    assert nit <= 3 and nfev >= 5


def test_env_var_forces_python_fallback():
    code = "import covchan, covchan._backend as b; print(covchan.BACKEND, b.kernels.__name__)"
    env = dict(os.environ, COVCHAN_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True).stdout.split()
    assert out == ["python", "covchan._pykernels"]
