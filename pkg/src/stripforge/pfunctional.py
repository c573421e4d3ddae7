"""Reduced functional on spherical tangent images.

Optimizing the curvature of a space curve with a prescribed tangent image
(length and endpoints constrained by multipliers mu and b0) collapses the
bending energy to P = 2 int sqrt(<T,b0> - mu) (1+lambda^2) ds on the sphere.
The minimizing curvature is kappa = sqrt(<T,b0> - mu)/(1+lambda^2).

Multiplier normalization (determined numerically, not printed in standard
references): for a strip that is critical at multiplier mu with conserved
force vector b0_force, the stationarity relation <T,b0> = kappa^2(1+lam^2)^2
+ mu holds with b0 = 2 * b0_force, since <T, b0_force> = (kappa^2(1+lam^2)^2
+ mu)/2 identically. Use multipliers_from_strip to get the pair.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.interpolate import CubicSpline

from .curves import FramedCurve, fd_derivative, quadrature, resample_by_arclength
from .errors import DomainViolation, NonPositiveKappa


@dataclass
class SphericalCurve:
    """Unit-sphere curve sampled by its own arclength, with geodesic curvature."""

    h: float
    points: np.ndarray  # (n, 3), unit vectors
    lam: np.ndarray

    @property
    def n(self) -> int:
        return self.points.shape[0]

    @property
    def length(self) -> float:
        return self.h * (self.n - 1)


@dataclass
class PFunctionalReport:
    P: float
    b0: np.ndarray
    mu: float
    kappa_opt: np.ndarray
    integrand: np.ndarray


def p_functional(tangent: SphericalCurve, b0, mu: float) -> PFunctionalReport:
    """P = 2 int sqrt(<T,b0> - mu) (1 + lambda^2) ds and the optimal kappa."""
    b0 = np.asarray(b0, dtype=float)
    radicand = tangent.points @ b0 - mu
    if radicand.min() <= 0.0:
        raise DomainViolation(
            f"<T,b0> - mu must stay positive; min = {radicand.min():g}"
        )
    e = 1.0 + tangent.lam**2
    integrand = 2.0 * np.sqrt(radicand) * e
    P = quadrature(integrand, tangent.h).value
    return PFunctionalReport(
        P=P, b0=b0, mu=float(mu), kappa_opt=np.sqrt(radicand) / e, integrand=integrand
    )


def p_augmented(tangent: SphericalCurve, kappa: np.ndarray, b0, mu: float) -> float:
    """P_T(kappa) = int (kappa (1+lam^2)^2 - mu/kappa + <T,b0>/kappa) ds.

    By the arithmetic-geometric mean inequality P_T(kappa) >= P(T) for every
    positive kappa field, with equality exactly at kappa_opt.
    """
    kappa = np.asarray(kappa, dtype=float)
    if np.any(kappa <= 0.0):
        raise NonPositiveKappa("kappa must be positive at every node")
    b0 = np.asarray(b0, dtype=float)
    e = 1.0 + tangent.lam**2
    integrand = kappa * e**2 + (tangent.points @ b0 - mu) / kappa
    return quadrature(integrand, tangent.h).value


def multipliers_from_strip(strip) -> tuple:
    """(mu, b0) multiplier pair under which the strip's kappa is P-optimal."""
    from .variational import force_field

    ff = force_field(strip.profile, strip.mu, strip.frame)
    return strip.mu, 2.0 * ff.b0.mean(axis=0)


def tangent_image_of_strip(strip) -> SphericalCurve:
    """Resample a strip's tangent vectors by their spherical arclength.

    The sphere arclength element is kappa ds, and the geodesic curvature of
    the tangent image is the strip's modified torsion lambda.
    """
    res = resample_by_arclength(
        strip.profile.h,
        strip.profile.kappa,
        {"T": strip.frame.T, "lam": strip.profile.lam},
    )
    pts = res.fields["T"]
    pts = pts / np.linalg.norm(pts, axis=1, keepdims=True)
    return SphericalCurve(h=res.h, points=pts, lam=res.fields["lam"])


def reconstruct_from_tangent(tangent: SphericalCurve, kappa: np.ndarray) -> FramedCurve:
    """Space curve gamma = int (1/kappa) T ds with the given tangent image.

    Positions come from the spline antiderivative of T/kappa in the sphere
    arclength variable; the frame is completed from the sampled tangents
    (N along dT/ds, B = T x N). The result is parametrized by the sphere
    arclength, with speed 1/kappa stored per node.
    """
    kappa = np.asarray(kappa, dtype=float)
    if np.any(kappa <= 0.0):
        raise NonPositiveKappa("kappa must be positive at every node")
    s = tangent.h * np.arange(tangent.n)
    integrand = tangent.points / kappa[:, None]
    gamma = CubicSpline(s, integrand, axis=0).antiderivative()(s)
    T = tangent.points
    dT = np.column_stack(
        [fd_derivative(T[:, k], tangent.h, 1, 5) for k in range(3)]
    )
    N = dT - np.sum(dT * T, axis=1, keepdims=True) * T
    N /= np.linalg.norm(N, axis=1, keepdims=True)
    B = np.cross(T, N)
    return FramedCurve(h=tangent.h, gamma=gamma, T=T, N=N, B=B, v=1.0 / kappa)
