# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the built-in disk-map families.

Mirrors spirallab._core_py (same functions, same family codes); selected in
preference to it by spirallab.kernels when the extension built.
"""

import numpy as np
cimport numpy as cnp

cdef extern from "complex.h" nogil:
    double complex clog(double complex)
    double complex cexp(double complex)
    double complex csqrt(double complex)
    double cabs(double complex)

BACKEND = "cython"

DEF NEWTON_MAX_ITER = 100
cdef double NEWTON_TOL = 1e-12
cdef double DISK_CLAMP = 1.0 - 1e-9


cdef double complex _poly(const double complex* c, Py_ssize_t n, double complex z) nogil:
    cdef double complex acc = 0
    cdef Py_ssize_t i
    for i in range(n - 1, -1, -1):
        acc = acc * z + c[i]
    return acc


cdef double complex _eval1(int code, const double complex* pr,
                           const double complex* num, Py_ssize_t nn,
                           const double complex* den, Py_ssize_t nd,
                           double complex z) nogil:
    cdef double complex u
    if code == 0:
        return z
    elif code == 1:
        u = 1.0 - z
        return z / (u * u)
    elif code == 2:
        return z / (1.0 + pr[0] * z)
    elif code == 3:
        return z * cexp(-pr[0] * clog(1.0 - z))
    elif code == 4:
        return (1.0 - z) / (1.0 + z)
    return _poly(num, nn, z) / _poly(den, nd, z)


cdef double complex _deriv1(int code, const double complex* pr,
                            const double complex* num, Py_ssize_t nn,
                            const double complex* den, Py_ssize_t nd,
                            const double complex* num1, Py_ssize_t nn1,
                            const double complex* den1, Py_ssize_t nd1,
                            double complex z) nogil:
    cdef double complex u, n, d
    if code == 0:
        return 1.0
    elif code == 1:
        u = 1.0 - z
        return (1.0 + z) / (u * u * u)
    elif code == 2:
        u = 1.0 + pr[0] * z
        return 1.0 / (u * u)
    elif code == 3:
        return cexp(-(pr[0] + 1.0) * clog(1.0 - z)) * (1.0 + pr[1] * z)
    elif code == 4:
        u = 1.0 + z
        return -2.0 / (u * u)
    n = _poly(num, nn, z)
    d = _poly(den, nd, z)
    return (_poly(num1, nn1, z) * d - n * _poly(den1, nd1, z)) / (d * d)


def _as_c(arr):
    if arr is None:
        return np.zeros(1, dtype=complex)
    a = np.ascontiguousarray(np.atleast_1d(np.asarray(arr, dtype=complex)))
    return a if a.shape[0] else np.zeros(1, dtype=complex)


def eval_map(int code, params, num, den, z):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] pr = _as_c(params)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] nu = _as_c(num)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] de = _as_c(den)
    zz = np.ascontiguousarray(np.atleast_1d(np.asarray(z, dtype=complex)).ravel())
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zv = zz
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty_like(zv)
    cdef Py_ssize_t i, n = zv.shape[0]
    for i in range(n):
        out[i] = _eval1(code, &pr[0], &nu[0], nu.shape[0], &de[0], de.shape[0], zv[i])
    return out.reshape(np.shape(np.atleast_1d(z)))


def eval_deriv(int code, params, num, den, z):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] pr = _as_c(params)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] nu = _as_c(num)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] de = _as_c(den)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] nu1 = _as_c(_polyder(num))
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] de1 = _as_c(_polyder(den))
    zz = np.ascontiguousarray(np.atleast_1d(np.asarray(z, dtype=complex)).ravel())
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] zv = zz
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty_like(zv)
    cdef Py_ssize_t i, n = zv.shape[0]
    for i in range(n):
        out[i] = _deriv1(code, &pr[0], &nu[0], nu.shape[0], &de[0], de.shape[0],
                         &nu1[0], nu1.shape[0], &de1[0], de1.shape[0], zv[i])
    return out.reshape(np.shape(np.atleast_1d(z)))


def _polyder(c):
    if c is None:
        return None
    c = np.atleast_1d(np.asarray(c, dtype=complex))
    if c.shape[0] <= 1:
        return np.zeros(1, dtype=complex)
    return c[1:] * np.arange(1, c.shape[0], dtype=float)


def eval_deriv2(int code, params, num, den, z):
    # second derivative is never hot; reuse the python backend formulas
    from . import _core_py
    return _core_py.eval_deriv2(code, params, num, den, z)


def log_deriv(int code, params, num, den, z):
    from . import _core_py
    return _core_py.log_deriv(code, params, num, den, z)


def invert(int code, params, num, den, w, guess):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] pr = _as_c(params)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] nu = _as_c(num)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] de = _as_c(den)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] nu1 = _as_c(_polyder(num))
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] de1 = _as_c(_polyder(den))
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] wv = _as_c(w).ravel()
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] gv = (_as_c(guess) * np.ones_like(wv)).ravel()
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.empty_like(wv)
    cdef Py_ssize_t i, n = wv.shape[0]
    cdef double complex ww, z0, cand, resid, new_resid, step
    cdef double lam, r
    cdef int it, k, converged
    for i in range(n):
        ww = wv[i]
        if code == 0:
            out[i] = ww
            continue
        elif code == 1:
            # rationalized root of w z^2 - (2w+1) z + w = 0; stable as w -> 0
            out[i] = 2.0 * ww / (2.0 * ww + 1.0 + csqrt(4.0 * ww + 1.0))
            continue
        elif code == 2:
            out[i] = ww / (1.0 - pr[0] * ww)
            continue
        elif code == 4:
            out[i] = (1.0 - ww) / (1.0 + ww)
            continue
        z0 = gv[i]
        r = cabs(z0)
        if r >= DISK_CLAMP:
            z0 *= DISK_CLAMP / r
        resid = _eval1(code, &pr[0], &nu[0], nu.shape[0], &de[0], de.shape[0], z0) - ww
        converged = cabs(resid) <= NEWTON_TOL
        for it in range(NEWTON_MAX_ITER):
            if converged:
                break
            step = resid / _deriv1(code, &pr[0], &nu[0], nu.shape[0], &de[0], de.shape[0],
                                   &nu1[0], nu1.shape[0], &de1[0], de1.shape[0], z0)
            lam = 1.0
            for k in range(25):
                cand = z0 - lam * step
                r = cabs(cand)
                if r >= DISK_CLAMP:
                    cand *= DISK_CLAMP / r
                new_resid = _eval1(code, &pr[0], &nu[0], nu.shape[0],
                                   &de[0], de.shape[0], cand) - ww
                if cabs(new_resid) < cabs(resid) or lam <= 2.0 ** -24:
                    break
                lam *= 0.5
            z0 = cand
            resid = new_resid
            converged = cabs(resid) <= NEWTON_TOL
        out[i] = z0 if converged else complex("nan")
    return out


def covered_min_distance(int code, params, num, den, double threshold,
                         double complex center, int nr, int nt, double boundary_eps):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] pr = _as_c(params)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] nu = _as_c(num)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] de = _as_c(den)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] nu1 = _as_c(_polyder(num))
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] de1 = _as_c(_polyder(den))
    cdef double best = np.inf, bmin = np.inf
    cdef double complex witness = complex("nan")
    cdef Py_ssize_t n_out = 0
    cdef Py_ssize_t ir, jt
    cdef double rr, th, crit, d
    cdef double complex x, hx
    cdef double two_pi = 2.0 * np.pi
    with nogil:
        for ir in range(nr):
            rr = 1.0 - (1.0 - (<double>ir) / nr) ** 2
            for jt in range(nt):
                th = two_pi * jt / nt
                x = rr * (cexp(1j * th))
                crit = cabs(_deriv1(code, &pr[0], &nu[0], nu.shape[0], &de[0], de.shape[0],
                                    &nu1[0], nu1.shape[0], &de1[0], de1.shape[0], x)) \
                       * (1.0 - rr * rr)
                if crit <= threshold:
                    n_out += 1
                    hx = _eval1(code, &pr[0], &nu[0], nu.shape[0], &de[0], de.shape[0], x)
                    d = cabs(hx - center)
                    if d < best:
                        best = d
                        witness = x
        for jt in range(nt):
            th = two_pi * jt / nt
            x = (1.0 - boundary_eps) * cexp(1j * th)
            hx = _eval1(code, &pr[0], &nu[0], nu.shape[0], &de[0], de.shape[0], x)
            d = cabs(hx - center)
            if d < bmin:
                bmin = d
    return float(best), complex(witness), float(bmin), int(n_out)
