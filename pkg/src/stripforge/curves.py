"""Intrinsic curve data, Frenet frame transport, differentiation and quadrature.

Everything downstream works on a uniform arclength grid: curvature kappa > 0
and modified torsion lambda = tau/kappa per node, with optional derivative
jets (kappa', kappa'', kappa''', lambda', lambda'', lambda''').
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline

from . import backend
from .errors import (
    GridTooSmall,
    MissingJets,
    NonOrthonormalInitialFrame,
    NonPositiveCurvature,
    NonPositiveSpeed,
)

TOL_FRAME = 1e-10

JET_NAMES = ("dkappa", "d2kappa", "d3kappa", "dlam", "d2lam", "d3lam")


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass
class CurvatureProfile:
    """Sampled (kappa, lambda) on a uniform arclength grid of spacing h."""

    h: float
    kappa: np.ndarray
    lam: np.ndarray
    dkappa: Optional[np.ndarray] = None
    d2kappa: Optional[np.ndarray] = None
    d3kappa: Optional[np.ndarray] = None
    dlam: Optional[np.ndarray] = None
    d2lam: Optional[np.ndarray] = None
    d3lam: Optional[np.ndarray] = None
    jet_source: Optional[str] = None  # "analytic" | "finite-difference"

    def __post_init__(self):
        self.kappa = np.asarray(self.kappa, dtype=float)
        self.lam = np.asarray(self.lam, dtype=float)
        if self.h <= 0:
            raise ValueError("grid spacing h must be positive")
        if self.kappa.shape != self.lam.shape or self.kappa.ndim != 1:
            raise ValueError("kappa and lambda must be 1-d arrays of equal length")
        if self.n < 5:
            raise GridTooSmall(f"need at least 5 nodes, got {self.n}")
        if np.any(self.kappa <= 0.0):
            raise NonPositiveCurvature("kappa must be positive at every node")

    @property
    def n(self) -> int:
        return self.kappa.size

    @property
    def s(self) -> np.ndarray:
        return self.h * np.arange(self.n)

    @property
    def length(self) -> float:
        return self.h * (self.n - 1)

    @property
    def has_jets(self) -> bool:
        return all(getattr(self, name) is not None for name in JET_NAMES)

    def require_jets(self) -> None:
        if not self.has_jets:
            raise MissingJets(
                "profile lacks derivative jets; call differentiate_profile first"
            )

    def jets(self):
        """(kappa, k', k'', k''', lambda, l', l'', l''') as a tuple of arrays."""
        self.require_jets()
        return (
            self.kappa,
            self.dkappa,
            self.d2kappa,
            self.d3kappa,
            self.lam,
            self.dlam,
            self.d2lam,
            self.d3lam,
        )


@dataclass
class FramedCurve:
    """Arclength-sampled space curve with an orthonormal Frenet triad."""

    h: float
    gamma: np.ndarray  # (n, 3)
    T: np.ndarray
    N: np.ndarray
    B: np.ndarray
    profile: Optional[CurvatureProfile] = None
    v: float = 1.0  # speed; 1 for arclength parametrization

    @property
    def n(self) -> int:
        return self.gamma.shape[0]

    @property
    def s(self) -> np.ndarray:
        return self.h * np.arange(self.n)

    def frame_defect(self) -> float:
        """Max orthonormality violation over all nodes."""
        worst = 0.0
        for a, b in ((self.T, self.T), (self.N, self.N), (self.B, self.B)):
            worst = max(worst, float(np.abs(np.sum(a * b, axis=1) - 1.0).max()))
        for a, b in ((self.T, self.N), (self.T, self.B), (self.N, self.B)):
            worst = max(worst, float(np.abs(np.sum(a * b, axis=1)).max()))
        return worst

    def handedness(self) -> np.ndarray:
        return np.sum(np.cross(self.T, self.N) * self.B, axis=1)


@dataclass
class QuadratureResult:
    value: float
    rule: str  # "simpson" | "trapezoid"
    h: float


# ---------------------------------------------------------------------------
# finite differences (Fornberg weights on uniform windows)
# ---------------------------------------------------------------------------

def fd_weights(offsets: np.ndarray, m: int) -> np.ndarray:
    """Weights for the m-th derivative at offset 0 from integer node offsets."""
    x = np.asarray(offsets, dtype=float)
    npts = x.size
    c = np.zeros((npts, m + 1))
    c[0, 0] = 1.0
    c1 = 1.0
    c4 = x[0]
    for i in range(1, npts):
        mn = min(i, m)
        c2 = 1.0
        c5 = c4
        c4 = x[i]
        for j in range(i):
            c3 = x[i] - x[j]
            c2 *= c3
            if j == i - 1:
                for d in range(mn, 0, -1):
                    c[i, d] = c1 * (d * c[i - 1, d - 1] - c5 * c[i - 1, d]) / c2
                c[i, 0] = -c1 * c5 * c[i - 1, 0] / c2
            for d in range(mn, 0, -1):
                c[j, d] = (c4 * c[j, d] - d * c[j, d - 1]) / c3
            c[j, 0] = c4 * c[j, 0] / c3
        c1 = c2
    return c[:, m]


def fd_derivative(values: np.ndarray, h: float, m: int, npts: int) -> np.ndarray:
    """m-th derivative on a uniform grid with an npts-wide sliding stencil.

    Interior nodes use the centered window; near the boundary the window is
    shifted (one-sided), keeping the same width. Bit-reproducible: weights
    depend only on (m, npts, position).
    """
    values = np.asarray(values, dtype=float)
    n = values.size
    if n < npts:
        raise GridTooSmall(f"need at least {npts} nodes for this stencil")
    half = (npts - 1) // 2
    out = np.empty(n)
    # interior: one weight vector applied by correlation
    wc = fd_weights(np.arange(-half, npts - half), m) / h**m
    lo, hi = half, n - (npts - half - 1)
    if hi > lo:
        windows = np.lib.stride_tricks.sliding_window_view(values, npts)
        out[lo:hi] = windows[lo - half : hi - half] @ wc
    for i in range(lo):
        w = fd_weights(np.arange(npts) - i, m) / h**m
        out[i] = values[:npts] @ w
    for i in range(hi, n):
        shift = i - (n - npts)
        w = fd_weights(np.arange(npts) - shift, m) / h**m
        out[i] = values[n - npts :] @ w
    return out


def differentiate_profile(profile: CurvatureProfile) -> CurvatureProfile:
    """Fill jets by finite differences.

    First and second derivatives: 5-point centered (4th order), 6-point
    one-sided at the boundary. Third derivatives: 5-point (2nd order).
    """
    if profile.n < 7:
        raise GridTooSmall("differentiate_profile needs n >= 7")
    h = profile.h
    return replace(
        profile,
        dkappa=fd_derivative(profile.kappa, h, 1, 5),
        d2kappa=_second_derivative(profile.kappa, h),
        d3kappa=fd_derivative(profile.kappa, h, 3, 5),
        dlam=fd_derivative(profile.lam, h, 1, 5),
        d2lam=_second_derivative(profile.lam, h),
        d3lam=fd_derivative(profile.lam, h, 3, 5),
        jet_source="finite-difference",
    )


def _second_derivative(values: np.ndarray, h: float) -> np.ndarray:
    """4th-order second derivative: centered 5-point, 6-point at the edges."""
    out = fd_derivative(values, h, 2, 5)
    n = values.size
    if n >= 6:
        for i in (0, 1):
            w = fd_weights(np.arange(6) - i, 2) / h**2
            out[i] = values[:6] @ w
        for i in (n - 2, n - 1):
            shift = i - (n - 6)
            w = fd_weights(np.arange(6) - shift, 2) / h**2
            out[i] = values[n - 6 :] @ w
    return out


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def quadrature(values: np.ndarray, h: float) -> QuadratureResult:
    """Composite Simpson when the node count is odd; otherwise Simpson on the
    first n-1 nodes plus a trapezoid on the final interval (rule recorded)."""
    values = np.asarray(values, dtype=float)
    n = values.size
    if n < 2:
        raise ValueError("quadrature needs at least 2 nodes")
    if n == 2:
        return QuadratureResult(0.5 * h * (values[0] + values[1]), "trapezoid", h)
    if n % 2 == 1:
        return QuadratureResult(_simpson(values, h), "simpson", h)
    val = _simpson(values[:-1], h) + 0.5 * h * (values[-2] + values[-1])
    return QuadratureResult(val, "trapezoid", h)


def _simpson(values: np.ndarray, h: float) -> float:
    return (h / 3.0) * (
        values[0]
        + values[-1]
        + 4.0 * values[1:-1:2].sum()
        + 2.0 * values[2:-2:2].sum()
    )


# ---------------------------------------------------------------------------
# frame transport
# ---------------------------------------------------------------------------

def half_grid(values: np.ndarray) -> np.ndarray:
    """Interleave node values with cubic midpoint interpolants (O(h^4))."""
    f = np.asarray(values, dtype=float)
    n = f.size
    out = np.empty(2 * n - 1)
    out[::2] = f
    if n == 2:
        out[1] = 0.5 * (f[0] + f[1])
        return out
    mids = np.empty(n - 1)
    mids[1:-1] = (-f[:-3] + 9.0 * f[1:-2] + 9.0 * f[2:-1] - f[3:]) / 16.0
    mids[0] = (5.0 * f[0] + 15.0 * f[1] - 5.0 * f[2] + f[3]) / 16.0
    mids[-1] = (5.0 * f[-1] + 15.0 * f[-2] - 5.0 * f[-3] + f[-4]) / 16.0
    out[1::2] = mids
    return out


def check_initial_frame(T0, N0, B0, tol: float = TOL_FRAME) -> None:
    M = np.array([T0, N0, B0], dtype=float)
    G = M @ M.T
    if np.abs(G - np.eye(3)).max() > tol:
        raise NonOrthonormalInitialFrame("initial triad is not orthonormal")
    if np.linalg.det(M) <= 0.0:
        raise NonOrthonormalInitialFrame("initial triad is not right-handed")


def transport_frame(alpha_half, beta_half, weight_half, h, origin, T0, N0, B0):
    """RK4 transport of (p, E1, E2, E3) with half-grid coefficient samples."""
    check_initial_frame(T0, N0, B0)
    p, e1, e2, e3 = backend.frame_rk4(
        np.asarray(alpha_half, float),
        np.asarray(beta_half, float),
        np.asarray(weight_half, float),
        float(h),
        np.asarray(origin, float),
        np.asarray(T0, float),
        np.asarray(N0, float),
        np.asarray(B0, float),
    )
    return p, e1, e2, e3


def integrate_frame(
    profile: CurvatureProfile,
    origin=(0.0, 0.0, 0.0),
    T0=(1.0, 0.0, 0.0),
    N0=(0.0, 1.0, 0.0),
    B0=(0.0, 0.0, 1.0),
) -> FramedCurve:
    """Integrate the arclength Frenet system for the given profile."""
    kappa_half = half_grid(profile.kappa)
    if np.any(kappa_half <= 0.0):
        raise NonPositiveCurvature("kappa must stay positive on the half grid")
    beta_half = half_grid(profile.lam * profile.kappa)
    weight_half = np.ones_like(kappa_half)
    p, T, N, B = transport_frame(
        kappa_half, beta_half, weight_half, profile.h, origin, T0, N0, B0
    )
    return FramedCurve(h=profile.h, gamma=p, T=T, N=N, B=B, profile=profile)


# ---------------------------------------------------------------------------
# reparametrization
# ---------------------------------------------------------------------------

@dataclass
class ResampleResult:
    h: float                      # output arclength spacing
    s: np.ndarray                 # uniform arclength grid
    t_of_s: np.ndarray            # parameter values the output nodes map to
    s_of_t: np.ndarray            # arclength at the input nodes
    fields: dict = field(default_factory=dict)


def resample_by_arclength(
    h_t: float,
    speed: np.ndarray,
    fields: dict,
    h_out: Optional[float] = None,
) -> ResampleResult:
    """Resample t-gridded fields onto a uniform arclength grid.

    The arclength map s(t) is the antiderivative of a cubic spline through
    the speed samples; its inverse is evaluated by spline interpolation of
    t against s. Scalar fields get cubic-spline interpolation, (n,3) fields
    are interpolated column-wise.
    """
    speed = np.asarray(speed, dtype=float)
    if np.any(speed <= 0.0):
        raise NonPositiveSpeed("speed must be positive everywhere")
    n_t = speed.size
    t = h_t * np.arange(n_t)
    s_of_t = CubicSpline(t, speed).antiderivative()(t)
    length = float(s_of_t[-1])
    if h_out is None:
        h_out = h_t
    n_out = max(int(round(length / h_out)) + 1, 5)
    h_out = length / (n_out - 1)
    s = h_out * np.arange(n_out)
    t_of_s = CubicSpline(s_of_t, t)(s)
    t_of_s[0], t_of_s[-1] = t[0], t[-1]
    out = {}
    for name, values in fields.items():
        values = np.asarray(values, dtype=float)
        out[name] = CubicSpline(t, values)(t_of_s)
    return ResampleResult(h=h_out, s=s, t_of_s=t_of_s, s_of_t=s_of_t, fields=out)


def orthonormalize_frame(T, N, B):
    """Row-wise modified Gram-Schmidt; B is rebuilt as T x N (right-handed)."""
    T = T / np.linalg.norm(T, axis=1, keepdims=True)
    N = N - np.sum(N * T, axis=1, keepdims=True) * T
    N = N / np.linalg.norm(N, axis=1, keepdims=True)
    return T, N, np.cross(T, N)


# ---------------------------------------------------------------------------
# discrete re-extraction (independent of the analytic jets)
# ---------------------------------------------------------------------------

def extract_profile_from_points(points: np.ndarray, h_t: float):
    """Discrete (v, kappa, lambda) from sampled positions.

    kappa = |g' x g''| / |g'|^3 and tau = det(g', g'', g''') / |g' x g''|^2
    with all position derivatives taken by 4th-order finite differences
    (7-point windows for the third derivative). Used as the oracle side of
    variational checks, so it deliberately never touches profile jets.
    """
    g = np.asarray(points, dtype=float)
    d1 = np.column_stack([fd_derivative(g[:, k], h_t, 1, 5) for k in range(3)])
    d2 = np.column_stack([fd_derivative(g[:, k], h_t, 2, 7) for k in range(3)])
    d3 = np.column_stack([fd_derivative(g[:, k], h_t, 3, 7) for k in range(3)])
    v = np.linalg.norm(d1, axis=1)
    c12 = np.cross(d1, d2)
    nc12 = np.linalg.norm(c12, axis=1)
    kappa = nc12 / v**3
    tau = np.sum(c12 * d3, axis=1) / nc12**2
    return v, kappa, tau / kappa
