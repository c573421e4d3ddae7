# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled integration kernels. Same contracts as ``_kernels_py``."""

import numpy as np

cimport numpy as cnp
from libc.math cimport sqrt

cnp.import_array()


cdef inline void _rhs(double a, double b, double w,
                      double* y, double* out) nogil:
    # y rows: p, e1, e2, e3 (3 doubles each)
    cdef int i
    for i in range(3):
        out[i] = w * y[3 + i]                       # p' = w e1
        out[3 + i] = a * y[6 + i]                   # e1' = a e2
        out[6 + i] = -a * y[3 + i] + b * y[9 + i]   # e2' = -a e1 + b e3
        out[9 + i] = -b * y[6 + i]                  # e3' = -b e2


cdef inline void _gram_schmidt(double* y) nogil:
    cdef double nrm, dot
    cdef int i
    nrm = sqrt(y[3] * y[3] + y[4] * y[4] + y[5] * y[5])
    for i in range(3):
        y[3 + i] /= nrm
    dot = y[6] * y[3] + y[7] * y[4] + y[8] * y[5]
    for i in range(3):
        y[6 + i] -= dot * y[3 + i]
    nrm = sqrt(y[6] * y[6] + y[7] * y[7] + y[8] * y[8])
    for i in range(3):
        y[6 + i] /= nrm
    dot = y[9] * y[3] + y[10] * y[4] + y[11] * y[5]
    for i in range(3):
        y[9 + i] -= dot * y[3 + i]
    dot = y[9] * y[6] + y[10] * y[7] + y[11] * y[8]
    for i in range(3):
        y[9 + i] -= dot * y[6 + i]
    nrm = sqrt(y[9] * y[9] + y[10] * y[10] + y[11] * y[11])
    for i in range(3):
        y[9 + i] /= nrm


def frame_rk4(a, b, w, double h, p0, e1_0, e2_0, e3_0):
    a = np.ascontiguousarray(a, dtype=np.float64)
    b = np.ascontiguousarray(b, dtype=np.float64)
    w = np.ascontiguousarray(w, dtype=np.float64)
    if not (a.shape == b.shape == w.shape) or a.ndim != 1 or a.size % 2 == 0:
        raise ValueError("coefficient arrays must share an odd 1-d shape")
    cdef Py_ssize_t n = (a.size + 1) // 2
    cdef double[::1] av = a, bv = b, wv = w

    p_arr = np.empty((n, 3))
    e1_arr = np.empty((n, 3))
    e2_arr = np.empty((n, 3))
    e3_arr = np.empty((n, 3))
    cdef double[:, ::1] pv = p_arr, e1v = e1_arr, e2v = e2_arr, e3v = e3_arr

    cdef double y[12]
    cdef double yt[12]
    cdef double k1[12]
    cdef double k2[12]
    cdef double k3[12]
    cdef double k4[12]
    cdef Py_ssize_t i, j, k
    cdef double h6 = h / 6.0

    p0 = np.asarray(p0, dtype=np.float64)
    e1_0 = np.asarray(e1_0, dtype=np.float64)
    e2_0 = np.asarray(e2_0, dtype=np.float64)
    e3_0 = np.asarray(e3_0, dtype=np.float64)
    for j in range(3):
        y[j] = p0[j]
        y[3 + j] = e1_0[j]
        y[6 + j] = e2_0[j]
        y[9 + j] = e3_0[j]

    with nogil:
        for j in range(3):
            pv[0, j] = y[j]
            e1v[0, j] = y[3 + j]
            e2v[0, j] = y[6 + j]
            e3v[0, j] = y[9 + j]
        for i in range(n - 1):
            k = 2 * i
            _rhs(av[k], bv[k], wv[k], y, k1)
            for j in range(12):
                yt[j] = y[j] + 0.5 * h * k1[j]
            _rhs(av[k + 1], bv[k + 1], wv[k + 1], yt, k2)
            for j in range(12):
                yt[j] = y[j] + 0.5 * h * k2[j]
            _rhs(av[k + 1], bv[k + 1], wv[k + 1], yt, k3)
            for j in range(12):
                yt[j] = y[j] + h * k3[j]
            _rhs(av[k + 2], bv[k + 2], wv[k + 2], yt, k4)
            for j in range(12):
                y[j] = y[j] + h6 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j])
            _gram_schmidt(y)
            for j in range(3):
                pv[i + 1, j] = y[j]
                e1v[i + 1, j] = y[3 + j]
                e2v[i + 1, j] = y[6 + j]
                e3v[i + 1, j] = y[9 + j]
    return p_arr, e1_arr, e2_arr, e3_arr


def duffing_rk4(double c, double y0, double dy0, double h_half, Py_ssize_t m):
    """Integrate y'' = -0.5 y^3 - c y for m steps of size h_half."""
    y_arr = np.empty(m + 1)
    dy_arr = np.empty(m + 1)
    cdef double[::1] yv = y_arr, dv = dy_arr
    cdef double yi = y0, di = dy0
    cdef double k1y, k1d, k2y, k2d, k3y, k3d, k4y, k4d, t
    cdef Py_ssize_t i
    yv[0] = yi
    dv[0] = di
    with nogil:
        for i in range(m):
            k1y = di
            k1d = -0.5 * yi * yi * yi - c * yi
            t = yi + 0.5 * h_half * k1y
            k2y = di + 0.5 * h_half * k1d
            k2d = -0.5 * t * t * t - c * t
            t = yi + 0.5 * h_half * k2y
            k3y = di + 0.5 * h_half * k2d
            k3d = -0.5 * t * t * t - c * t
            t = yi + h_half * k3y
            k4y = di + h_half * k3d
            k4d = -0.5 * t * t * t - c * t
            yi += (h_half / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
            di += (h_half / 6.0) * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
            yv[i + 1] = yi
            dv[i + 1] = di
    return y_arr, dy_arr
