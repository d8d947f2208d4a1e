"""Pure-Python minimum-output-entropy kernels.

Reference implementation and fallback for :mod:`covchan._ckernels`; both
expose ``pure_state``, ``output_entropy`` and ``nelder_mead`` with identical
signatures and run the same Nelder-Mead iteration.
"""
import numpy as np


def pure_state(x, d):
    x = np.asarray(x, dtype=float)
    n = d - 1
    psi = np.empty(d, dtype=complex)
    s = 1.0
    for k in range(d):
        if k < n:
            amp = s * np.cos(x[k])
            s *= np.sin(x[k])
        else:
            amp = s
        psi[k] = amp if k == 0 else amp * np.exp(1j * x[n + k - 1])
    return psi


class _Objective:
    def __init__(self, kraus, weights):
        self.kraus = np.ascontiguousarray(kraus, dtype=complex)
        self.weights = np.ascontiguousarray(weights, dtype=float)
        self.d = self.kraus.shape[1]
        self.nfev = 0

    def __call__(self, x):
        self.nfev += 1
        phi = self.kraus @ pure_state(x, self.d)
        out = np.einsum("a,ai,aj->ij", self.weights, phi, np.conj(phi))
        lam = np.linalg.eigvalsh(out)
        lam = lam[lam > 0]
        return float(-np.sum(lam * np.log2(lam)))


def output_entropy(kraus, weights, x):
    return _Objective(kraus, weights)(x)


def nelder_mead(kraus, weights, x0, step=0.5, xatol=1e-10, fatol=1e-14, maxiter=20000):
    """Minimize output entropy over the angle parametrization from ``x0``.

    Returns ``(x, f, nit, nfev)``.
    """
    f = _Objective(kraus, weights)
    x0 = np.asarray(x0, dtype=float)
    n = x0.size
    sim = np.tile(x0, (n + 1, 1))
    sim[1:] += step * np.eye(n)
    fs = np.array([f(v) for v in sim])
    it = 0
    while it < maxiter:
        order = np.argsort(fs, kind="stable")
        sim, fs = sim[order], fs[order]
        if np.max(np.abs(sim[1:] - sim[0])) <= xatol and abs(fs[n] - fs[0]) <= fatol:
            break
        it += 1
        cen = sim[:n].mean(axis=0)
        xr = 2.0 * cen - sim[n]
        fr = f(xr)
        shrink = False
        if fr < fs[0]:
            xe = 3.0 * cen - 2.0 * sim[n]
            fe = f(xe)
            if fe < fr:
                sim[n], fs[n] = xe, fe
            else:
                sim[n], fs[n] = xr, fr
        elif fr < fs[n - 1]:
            sim[n], fs[n] = xr, fr
        elif fr < fs[n]:
            xc = 1.5 * cen - 0.5 * sim[n]
            fc = f(xc)
            if fc <= fr:
                sim[n], fs[n] = xc, fc
            else:
                shrink = True
        else:
            xc = 0.5 * cen + 0.5 * sim[n]
            fc = f(xc)
            if fc < fs[n]:
                sim[n], fs[n] = xc, fc
            else:
                shrink = True
        if shrink:
            sim[1:] = sim[0] + 0.5 * (sim[1:] - sim[0])
            fs[1:] = [f(v) for v in sim[1:]]
    k = int(np.argmin(fs))
    return sim[k].copy(), float(fs[k]), it, f.nfev
