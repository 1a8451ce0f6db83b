# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled scattering kernel for the approximating graph.

Same system as ``_kernels_py``: assembly followed by complex Gaussian
elimination with partial pivoting, all right-hand sides at once.
"""

import numpy as np

from libc.math cimport cos, fabs, sin, sqrt


cdef inline double cabs(double complex z) nogil:
    return sqrt(z.real * z.real + z.imag * z.imag)


cdef inline double complex cexpi(double x) nogil:
    return cos(x) + 1j * sin(x)


def solve_graph(int n, const double[::1] alpha, const long[::1] starts,
                const long[::1] ends, const double[::1] length,
                const double[::1] phase, double k):
    """Return ``(S, pivot_ratio)``; ``pivot_ratio`` near 0 flags singularity."""
    cdef Py_ssize_t E = starts.shape[0]
    cdef Py_ssize_t N = n + 2 * E
    cdef Py_ssize_t i, j, e, r, col, piv
    cdef Py_ssize_t s, t, iu, iw
    cdef double complex ik = 1j * k
    cdef double complex g, f, tmp
    cdef double best, a, pmin, pmax, L, kL, c, sn

    M_arr = np.zeros((N, N), dtype=np.complex128)
    R_arr = np.zeros((N, n), dtype=np.complex128)
    scale_arr = np.empty(n, dtype=np.float64)
    cdef double complex[:, ::1] M = M_arr
    cdef double complex[:, ::1] R = R_arr
    cdef double[::1] scale = scale_arr

    with nogil:
        for j in range(n):
            scale[j] = 1.0 + fabs(alpha[j])
        for e in range(E):
            scale[starts[e]] += 1.0 / length[e]
            scale[ends[e]] += 1.0 / length[e]
        for j in range(n):
            M[j, j] = (ik - alpha[j]) / scale[j]
            R[j, j] = (ik + alpha[j]) / scale[j]
        for e in range(E):
            s = starts[e]
            t = ends[e]
            L = length[e]
            iu = n + 2 * e
            iw = iu + 1
            g = cexpi(phase[e])
            kL = k * L
            c = cos(kL)
            sn = sin(kL)
            M[s, iw] += 1.0 / (L * scale[s])
            M[t, iu] += g * (kL * sn / (L * scale[t]))
            M[t, iw] -= g * (c / (L * scale[t]))
            M[iu, iu] = 1.0
            M[iu, s] = -1.0
            R[iu, s] = 1.0
            M[iw, iu] = g * c
            M[iw, iw] = g * (sn / kL)
            M[iw, t] = -1.0
            R[iw, t] = 1.0

        pmin = 1e300
        pmax = 0.0
        for col in range(N):
            piv = col
            best = cabs(M[col, col])
            for r in range(col + 1, N):
                a = cabs(M[r, col])
                if a > best:
                    best = a
                    piv = r
            if best == 0.0:
                pmin = 0.0
                break
            if best < pmin:
                pmin = best
            if best > pmax:
                pmax = best
            if piv != col:
                for j in range(N):
                    tmp = M[col, j]
                    M[col, j] = M[piv, j]
                    M[piv, j] = tmp
                for j in range(n):
                    tmp = R[col, j]
                    R[col, j] = R[piv, j]
                    R[piv, j] = tmp
            for r in range(col + 1, N):
                if M[r, col] != 0:
                    f = M[r, col] / M[col, col]
                    for j in range(col + 1, N):
                        M[r, j] -= f * M[col, j]
                    for j in range(n):
                        R[r, j] -= f * R[col, j]
                    M[r, col] = 0

        if pmin > 0.0:
            for r in range(N - 1, -1, -1):
                for j in range(n):
                    tmp = R[r, j]
                    for col in range(r + 1, N):
                        tmp -= M[r, col] * R[col, j]
                    R[r, j] = tmp / M[r, r]

    if pmin == 0.0:
        return np.full((n, n), np.nan, dtype=np.complex128), 0.0
    return R_arr[:n, :].copy(), pmin / pmax
