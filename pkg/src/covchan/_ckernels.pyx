# cython: language_level=3
"""Compiled inner loop of the minimum-output-entropy search.

Same API and algorithm as :mod:`covchan._pykernels`.
"""
from libc.math cimport cos, sin, log2, fabs
from libc.stdlib cimport malloc, free
from scipy.linalg.cython_lapack cimport zheev

import numpy as np


cdef class _Objective:
    cdef const double complex[:, :, ::1] kraus
    cdef const double[::1] weights
    cdef int d, nk, lwork
    cdef double complex* psi
    cdef double complex* phi
    cdef double complex* out
    cdef double complex* work
    cdef double* evals
    cdef double* rwork
    cdef public long nfev

    def __cinit__(self, const double complex[:, :, ::1] kraus, const double[::1] weights):
        self.kraus = kraus
        self.weights = weights
        self.nk = kraus.shape[0]
        self.d = kraus.shape[1]
        self.lwork = 4 * self.d + 64
        self.psi = <double complex*> malloc(self.d * sizeof(double complex))
        self.phi = <double complex*> malloc(self.d * sizeof(double complex))
        self.out = <double complex*> malloc(self.d * self.d * sizeof(double complex))
        self.work = <double complex*> malloc(self.lwork * sizeof(double complex))
        self.evals = <double*> malloc(self.d * sizeof(double))
        self.rwork = <double*> malloc((3 * self.d) * sizeof(double))
        self.nfev = 0
        if not (self.psi and self.phi and self.out and self.work and self.evals and self.rwork):
            raise MemoryError()

    def __dealloc__(self):
        free(self.psi)
        free(self.phi)
        free(self.out)
        free(self.work)
        free(self.evals)
        free(self.rwork)

    cdef void state(self, const double* x) noexcept nogil:
        cdef int d = self.d, n = self.d - 1, k
        cdef double s = 1.0, amp, ph
        for k in range(d):
            if k < n:
                amp = s * cos(x[k])
                s = s * sin(x[k])
            else:
                amp = s
            if k == 0:
                self.psi[k] = amp
            else:
                ph = x[n + k - 1]
                self.psi[k] = amp * (cos(ph) + 1j * sin(ph))

    cdef double value(self, const double* x) noexcept nogil:
        cdef int d = self.d, a, i, j, info = 0, lwork = self.lwork
        cdef double complex acc
        cdef double w, lam, S = 0.0
        cdef char jobz = b'N'
        cdef char uplo = b'U'
        self.nfev += 1
        self.state(x)
        for i in range(d * d):
            self.out[i] = 0
        for a in range(self.nk):
            w = self.weights[a]
            for i in range(d):
                acc = 0
                for j in range(d):
                    acc = acc + self.kraus[a, i, j] * self.psi[j]
                self.phi[i] = acc
            for i in range(d):
                for j in range(d):
                    self.out[i * d + j] = self.out[i * d + j] + w * self.phi[i] * self.phi[j].conjugate()
        zheev(&jobz, &uplo, &d, self.out, &d, self.evals, self.work, &lwork, self.rwork, &info)
        if info != 0:
            return 1e300
        for i in range(d):
            lam = self.evals[i]
            if lam > 0:
                S -= lam * log2(lam)
        return S


def pure_state(x, int d):
    x = np.ascontiguousarray(x, dtype=float)
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


def output_entropy(kraus, weights, x):
    cdef _Objective obj = _Objective(np.ascontiguousarray(kraus, dtype=complex),
                                     np.ascontiguousarray(weights, dtype=float))
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=float)
    return obj.value(&xv[0])


def nelder_mead(kraus, weights, x0, double step=0.5, double xatol=1e-10,
                double fatol=1e-14, int maxiter=20000):
    """Minimize output entropy over the angle parametrization from ``x0``.

    Returns ``(x, f, nit, nfev)``.
    """
    cdef _Objective obj = _Objective(np.ascontiguousarray(kraus, dtype=complex),
                                     np.ascontiguousarray(weights, dtype=float))
    x0 = np.ascontiguousarray(x0, dtype=float)
    cdef int n = x0.shape[0], i, j, k, it = 0
    cdef double[:, ::1] sim = np.empty((n + 1, n), dtype=float)
    cdef double[::1] fs = np.empty(n + 1, dtype=float)
    cdef double[::1] cen = np.empty(n, dtype=float)
    cdef double[::1] xr = np.empty(n, dtype=float)
    cdef double[::1] xe = np.empty(n, dtype=float)
    cdef double[::1] xc = np.empty(n, dtype=float)
    cdef double fr, fe, fc, spread, tmp
    cdef bint shrink
    for i in range(n + 1):
        for j in range(n):
            sim[i, j] = x0[j]
        if i > 0:
            sim[i, i - 1] += step
        fs[i] = obj.value(&sim[i, 0])
    with nogil:
        while it < maxiter:
            # insertion sort of the n+1 vertices by value
            for i in range(1, n + 1):
                j = i
                while j > 0 and fs[j] < fs[j - 1]:
                    tmp = fs[j]; fs[j] = fs[j - 1]; fs[j - 1] = tmp
                    for k in range(n):
                        tmp = sim[j, k]; sim[j, k] = sim[j - 1, k]; sim[j - 1, k] = tmp
                    j -= 1
            spread = 0.0
            for i in range(1, n + 1):
                for j in range(n):
                    if fabs(sim[i, j] - sim[0, j]) > spread:
                        spread = fabs(sim[i, j] - sim[0, j])
            if spread <= xatol and fabs(fs[n] - fs[0]) <= fatol:
                break
            it += 1
            for j in range(n):
                cen[j] = 0.0
                for i in range(n):
                    cen[j] += sim[i, j]
                cen[j] /= n
            for j in range(n):
                xr[j] = 2.0 * cen[j] - sim[n, j]
            fr = obj.value(&xr[0])
            shrink = False
            if fr < fs[0]:
                for j in range(n):
                    xe[j] = 3.0 * cen[j] - 2.0 * sim[n, j]
                fe = obj.value(&xe[0])
                if fe < fr:
                    for j in range(n):
                        sim[n, j] = xe[j]
                    fs[n] = fe
                else:
                    for j in range(n):
                        sim[n, j] = xr[j]
                    fs[n] = fr
            elif fr < fs[n - 1]:
                for j in range(n):
                    sim[n, j] = xr[j]
                fs[n] = fr
            elif fr < fs[n]:
                for j in range(n):
                    xc[j] = 1.5 * cen[j] - 0.5 * sim[n, j]
                fc = obj.value(&xc[0])
                if fc <= fr:
                    for j in range(n):
                        sim[n, j] = xc[j]
                    fs[n] = fc
                else:
                    shrink = True
            else:
                for j in range(n):
                    xc[j] = 0.5 * cen[j] + 0.5 * sim[n, j]
                fc = obj.value(&xc[0])
                if fc < fs[n]:
                    for j in range(n):
                        sim[n, j] = xc[j]
                    fs[n] = fc
                else:
                    shrink = True
            if shrink:
                for i in range(1, n + 1):
                    for j in range(n):
                        sim[i, j] = sim[0, j] + 0.5 * (sim[i, j] - sim[0, j])
                    fs[i] = obj.value(&sim[i, 0])
    k = int(np.argmin(np.asarray(fs)))
    return np.asarray(sim[k]).copy(), float(fs[k]), it, obj.nfev
