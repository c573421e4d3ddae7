"""Pure-numpy fallback for the hot integration kernels.

Same contracts as the compiled extension ``stripforge._kernels``:

``frame_rk4``
    Fixed-step RK4 transport of a point + orthonormal triad along
    ``p' = w e1, e1' = a e2, e2' = -a e1 + b e3, e3' = -b e2`` with the
    scalar coefficients ``a, b, w`` sampled on the half-grid (spacing h/2,
    2n-1 samples for n output nodes). The triad is re-orthonormalized by
    modified Gram-Schmidt after every step.

``duffing_rk4``
    Fixed-step RK4 for ``y'' = -0.5 y^3 - c y`` returning (y, y') on the
    half-grid (2n-1 samples, spacing h/2).
"""
from __future__ import annotations

import numpy as np


def _gram_schmidt(e1, e2, e3):
    e1 /= np.sqrt(e1 @ e1)
    e2 -= (e2 @ e1) * e1
    e2 /= np.sqrt(e2 @ e2)
    e3 -= (e3 @ e1) * e1
    e3 -= (e3 @ e2) * e2
    e3 /= np.sqrt(e3 @ e3)
    return e1, e2, e3


def frame_rk4(a, b, w, h, p0, e1_0, e2_0, e3_0):
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    w = np.asarray(w, dtype=float)
    if not (a.shape == b.shape == w.shape) or a.ndim != 1 or a.size % 2 == 0:
        raise ValueError("coefficient arrays must share an odd 1-d shape")
    n = (a.size + 1) // 2

    def rhs(y, k):
        p, e1, e2, e3 = y
        return np.array(
            [w[k] * e1, a[k] * e2, -a[k] * e1 + b[k] * e3, -b[k] * e2]
        )

    p = np.empty((n, 3))
    e1 = np.empty((n, 3))
    e2 = np.empty((n, 3))
    e3 = np.empty((n, 3))
    y = np.array([p0, e1_0, e2_0, e3_0], dtype=float)
    p[0], e1[0], e2[0], e3[0] = y
    for i in range(n - 1):
        k = 2 * i
        k1 = rhs(y, k)
        k2 = rhs(y + 0.5 * h * k1, k + 1)
        k3 = rhs(y + 0.5 * h * k2, k + 1)
        k4 = rhs(y + h * k3, k + 2)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        y[1], y[2], y[3] = _gram_schmidt(y[1], y[2], y[3])
        p[i + 1], e1[i + 1], e2[i + 1], e3[i + 1] = y
    return p, e1, e2, e3


def duffing_rk4(c, y0, dy0, h_half, m):
    """Integrate y'' = -0.5 y^3 - c y for m steps of size h_half."""
    y = np.empty(m + 1)
    dy = np.empty(m + 1)
    y[0], dy[0] = y0, dy0

    def acc(v):
        return -0.5 * v * v * v - c * v

    yi, di = float(y0), float(dy0)
    for i in range(m):
        k1y, k1d = di, acc(yi)
        k2y, k2d = di + 0.5 * h_half * k1d, acc(yi + 0.5 * h_half * k1y)
        k3y, k3d = di + 0.5 * h_half * k2d, acc(yi + 0.5 * h_half * k2y)
        k4y, k4d = di + h_half * k3d, acc(yi + h_half * k3y)
        yi += (h_half / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
        di += (h_half / 6.0) * (k1d + 2.0 * k2d + 2.0 * k3d + k4d)
        y[i + 1], dy[i + 1] = yi, di
    return y, dy
