"""Explicit families of elastic strips driven by a spherical-elastica profile.

The geodesic curvature lambda of a spherical elastic curve obeys the cubic
oscillator lambda'' = -1/2 lambda^3 - (1 - l/2) lambda with first integral
lambda'^2 + 1/4 lambda^4 + (1 - l/2) lambda^2 = A. Integrating a moving
frame over such a solution yields, depending on the multiplier l, strips
with vanishing force (l = 1) or constant tangential torque (l = -mu), plus
the degenerate constant-profile family (helices) and constant-lambda strips
that unroll to planar elastic curves on a cylinder.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.interpolate import CubicSpline

from . import backend
from .curves import (
    CurvatureProfile,
    FramedCurve,
    half_grid,
    orthonormalize_frame,
    resample_by_arclength,
    transport_frame,
)
from .errors import (
    LambdaConstant,
    LambdaHasZeros,
    LambdaNotConstant,
    MultiplierMismatch,
)

LAMBDA_ZERO_TOL = 1e-6
LAMBDA_CONST_TOL = 1e-8


# ---------------------------------------------------------------------------
# spherical elastica
# ---------------------------------------------------------------------------

@dataclass
class ElasticaSolution:
    """Geodesic curvature of a spherical elastic curve on a uniform grid."""

    l: float
    A: float
    h: float
    lam: np.ndarray
    dlam: np.ndarray
    d2lam: np.ndarray
    d3lam: np.ndarray
    period_estimate: Optional[float] = None
    lam_half: np.ndarray = field(default=None, repr=False)
    dlam_half: np.ndarray = field(default=None, repr=False)

    @property
    def n(self) -> int:
        return self.lam.size

    @property
    def t(self) -> np.ndarray:
        return self.h * np.arange(self.n)

    @property
    def length(self) -> float:
        return self.h * (self.n - 1)

    def invariant_defect(self) -> float:
        """Max nodewise violation of the conserved first integral."""
        c = 1.0 - self.l / 2.0
        value = self.dlam**2 + 0.25 * self.lam**4 + c * self.lam**2
        return float(np.abs(value - self.A).max())


def _estimate_period(t: np.ndarray, dlam: np.ndarray) -> Optional[float]:
    """Period from sign changes of lambda' (linear interpolation at crossings)."""
    sign = np.sign(dlam)
    idx = np.nonzero((sign[:-1] * sign[1:] < 0))[0]
    if idx.size < 2:
        return None
    crossings = t[idx] - dlam[idx] * (t[idx + 1] - t[idx]) / (dlam[idx + 1] - dlam[idx])
    return float(2.0 * np.diff(crossings).mean())


def solve_spherical_elastica(
    l: float, lambda0: float, dlambda0: float, length: float, h: float
) -> ElasticaSolution:
    """RK4 integration of the cubic oscillator for the geodesic curvature.

    The solution is advanced at step h/2 so that downstream frame transport
    can sample the coefficients on the half grid without interpolation.
    """
    if h <= 0 or length <= 0:
        raise ValueError("length and h must be positive")
    c = 1.0 - l / 2.0
    n = int(round(length / h)) + 1
    lam_half, dlam_half = backend.duffing_rk4(
        c, float(lambda0), float(dlambda0), h / 2.0, 2 * (n - 1)
    )
    lam = lam_half[::2].copy()
    dlam = dlam_half[::2].copy()
    d2lam = -0.5 * lam**3 - c * lam
    d3lam = -1.5 * lam**2 * dlam - c * dlam
    A = dlambda0**2 + 0.25 * lambda0**4 + c * lambda0**2
    sol = ElasticaSolution(
        l=float(l),
        A=float(A),
        h=h,
        lam=lam,
        dlam=dlam,
        d2lam=d2lam,
        d3lam=d3lam,
        lam_half=lam_half,
        dlam_half=dlam_half,
    )
    sol.period_estimate = _estimate_period(sol.t, dlam)
    return sol


# ---------------------------------------------------------------------------
# strips
# ---------------------------------------------------------------------------

@dataclass
class StripConstruction:
    kind: str  # force_free | momentum | helix | planar_elastica | cylinder_geodesic
    profile: CurvatureProfile
    frame: FramedCurve
    mu: float
    provenance: dict = field(default_factory=dict)


def _s_jets_from_t_jets(lt, lt1, lt2, lt3, v, vt, vt2):
    """Chain rule: arclength jets of a field given parameter jets and speed."""
    l1 = lt1 / v
    num2 = lt2 * v - lt1 * vt
    l2 = num2 / v**3
    l3 = ((lt3 * v - lt1 * vt2) * v - 3.0 * vt * num2) / v**5
    return l1, l2, l3


def _kappa_jets(F, F1, F2, F3, l1, l2, l3):
    """Jets of kappa = F(lambda) composed with arclength jets of lambda."""
    k1 = F1 * l1
    k2 = F2 * l1**2 + F1 * l2
    k3 = F3 * l1**3 + 3.0 * F2 * l1 * l2 + F1 * l3
    return k1, k2, k3


def build_force_free(
    sol: ElasticaSolution, h_out: Optional[float] = None
) -> StripConstruction:
    """Strip with b0 = 0 from a spherical elastic curve with multiplier 1.

    The tangent image is transported on the sphere (T' = N, N' = -T + lam B,
    B' = -lam N) while the centerline accumulates gamma' = (1 + lam^2) T;
    the result is resampled to the centerline arclength. The curvature is
    kappa = 1/(1 + lam^2) exactly and mu = -1.
    """
    if abs(sol.l - 1.0) > 1e-12:
        raise MultiplierMismatch(f"force-free build needs l = 1, got l = {sol.l}")
    ones = np.ones_like(sol.lam_half)
    weight = 1.0 + sol.lam_half**2
    p, T, N, B = transport_frame(
        ones,
        sol.lam_half,
        weight,
        sol.h,
        (0.0, 0.0, 0.0),
        (1.0, 0.0, 0.0),
        (0.0, 1.0, 0.0),
        (0.0, 0.0, 1.0),
    )
    speed = 1.0 + sol.lam**2
    res = resample_by_arclength(
        sol.h,
        speed,
        {"gamma": p, "T": T, "N": N, "B": B, "lam": sol.lam, "dlam": sol.dlam},
        h_out=h_out,
    )
    lam = res.fields["lam"]
    lt1 = res.fields["dlam"]
    c = 0.5  # 1 - l/2 at l = 1
    lt2 = -0.5 * lam**3 - c * lam
    lt3 = -1.5 * lam**2 * lt1 - c * lt1
    v = 1.0 + lam**2
    vt = 2.0 * lam * lt1
    vt2 = 2.0 * lt1**2 + 2.0 * lam * lt2
    l1, l2, l3 = _s_jets_from_t_jets(lam, lt1, lt2, lt3, v, vt, vt2)

    F = 1.0 / v
    F1 = -2.0 * lam * F**2
    F2 = -2.0 * F**2 + 8.0 * lam**2 * F**3
    F3 = 24.0 * lam * F**3 - 48.0 * lam**3 * F**4
    k1, k2, k3 = _kappa_jets(F, F1, F2, F3, l1, l2, l3)

    profile = CurvatureProfile(
        h=res.h,
        kappa=F,
        lam=lam,
        dkappa=k1,
        d2kappa=k2,
        d3kappa=k3,
        dlam=l1,
        d2lam=l2,
        d3lam=l3,
        jet_source="analytic",
    )
    Ts, Ns, Bs = orthonormalize_frame(
        res.fields["T"], res.fields["N"], res.fields["B"]
    )
    frame = FramedCurve(h=res.h, gamma=res.fields["gamma"], T=Ts, N=Ns, B=Bs,
                        profile=profile)
    return StripConstruction(
        kind="force_free",
        profile=profile,
        frame=frame,
        mu=-1.0,
        provenance={"solution": sol, "t_of_s": res.t_of_s},
    )


def build_momentum(
    sol: ElasticaSolution, mu: Optional[float] = None, h_out: Optional[float] = None
) -> StripConstruction:
    """Strip with constant tangential torque from a spherical elastica.

    The binormal image B is the spherical elastic curve (multiplier -mu);
    its Frenet companions are N = -B' and T = B x B'. The centerline runs
    along gamma' = (1 + 1/lam^2) T, the strip's modified torsion is 1/lam
    and kappa = lam^3/(1 + lam^2). s1 = 2 holds nodewise by construction.
    """
    if mu is None:
        mu = -sol.l
    if abs(sol.l + mu) > 1e-12:
        raise MultiplierMismatch(
            f"momentum build needs l = -mu, got l = {sol.l}, mu = {mu}"
        )
    lam_sph = sol.lam_half
    if (
        np.abs(lam_sph).min() < LAMBDA_ZERO_TOL
        or np.any(lam_sph[:-1] * lam_sph[1:] <= 0.0)
    ):
        raise LambdaHasZeros("geodesic curvature crosses (or touches) zero")
    if np.abs(sol.dlam_half).max() < LAMBDA_CONST_TOL:
        raise LambdaConstant("constant geodesic curvature: use build_helix")
    flip = 1.0
    if lam_sph[0] < 0.0:
        # the oscillator is odd, so -lam solves it too; flip for kappa > 0
        flip = -1.0
        lam_sph = -lam_sph
    weight = 1.0 + 1.0 / lam_sph**2
    p, T, N, B = transport_frame(
        lam_sph,
        np.ones_like(lam_sph),
        weight,
        sol.h,
        (0.0, 0.0, 0.0),
        (1.0, 0.0, 0.0),
        (0.0, 1.0, 0.0),
        (0.0, 0.0, 1.0),
    )
    lt = flip * sol.lam
    dlt = flip * sol.dlam
    speed = 1.0 + 1.0 / lt**2
    res = resample_by_arclength(
        sol.h,
        speed,
        {"gamma": p, "T": T, "N": N, "B": B, "lam_sph": lt, "dlam_sph": dlt},
        h_out=h_out,
    )
    ls = res.fields["lam_sph"]
    ls1 = res.fields["dlam_sph"]
    c = 1.0 - sol.l / 2.0
    ls2 = -0.5 * ls**3 - c * ls
    ls3 = -1.5 * ls**2 * ls1 - c * ls1

    # strip fields in the spherical parameter t
    lam = 1.0 / ls
    lt1 = -ls1 / ls**2
    lt2 = -ls2 / ls**2 + 2.0 * ls1**2 / ls**3
    lt3 = -ls3 / ls**2 + 6.0 * ls1 * ls2 / ls**3 - 6.0 * ls1**3 / ls**4
    v = 1.0 + 1.0 / ls**2
    vt = -2.0 * ls1 / ls**3
    vt2 = -2.0 * ls2 / ls**3 + 6.0 * ls1**2 / ls**4
    l1, l2, l3 = _s_jets_from_t_jets(lam, lt1, lt2, lt3, v, vt, vt2)

    # kappa = 1/(lam (1 + lam^2)) = 1/q
    q = lam + lam**3
    q1 = 1.0 + 3.0 * lam**2
    q2 = 6.0 * lam
    F = 1.0 / q
    F1 = -q1 / q**2
    F2 = -q2 / q**2 + 2.0 * q1**2 / q**3
    F3 = -6.0 / q**2 + 6.0 * q1 * q2 / q**3 - 6.0 * q1**3 / q**4
    k1, k2, k3 = _kappa_jets(F, F1, F2, F3, l1, l2, l3)

    profile = CurvatureProfile(
        h=res.h,
        kappa=F,
        lam=lam,
        dkappa=k1,
        d2kappa=k2,
        d3kappa=k3,
        dlam=l1,
        d2lam=l2,
        d3lam=l3,
        jet_source="analytic",
    )
    Ts, Ns, Bs = orthonormalize_frame(
        res.fields["T"], res.fields["N"], res.fields["B"]
    )
    frame = FramedCurve(h=res.h, gamma=res.fields["gamma"], T=Ts, N=Ns, B=Bs,
                        profile=profile)
    return StripConstruction(
        kind="momentum",
        profile=profile,
        frame=frame,
        mu=float(mu),
        provenance={
            "solution": sol,
            "t_of_s": res.t_of_s,
            "lam_sph": ls,
            "dlam_sph": ls1,
        },
    )


def helix_mu(kappa: float, lam: float) -> float:
    """The unique mu making a constant (kappa, lambda) profile elastic."""
    e = 1.0 + lam * lam
    return -(kappa**2) * e * e * (1.0 + 2.0 * lam * lam)


def build_helix(
    kappa: float, lam: float, length: float = 10.0, h: float = 1e-3
) -> StripConstruction:
    """Constant-profile strip; mu is the root of f1 for constants."""
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    n = int(round(length / h)) + 1
    z = np.zeros(n)
    profile = CurvatureProfile(
        h=h,
        kappa=np.full(n, float(kappa)),
        lam=np.full(n, float(lam)),
        dkappa=z,
        d2kappa=z,
        d3kappa=z,
        dlam=z,
        d2lam=z,
        d3lam=z,
        jet_source="analytic",
    )
    from .curves import integrate_frame

    frame = integrate_frame(profile)
    return StripConstruction(
        kind="helix",
        profile=profile,
        frame=frame,
        mu=helix_mu(kappa, lam),
        provenance={"kappa": kappa, "lam": lam},
    )


def build_cylinder_geodesic(
    lam0: float, c: float, length: float, h: float = 1e-3
) -> StripConstruction:
    """Constant-lambda elastic strip whose centerline is a cylinder geodesic.

    The curvature is the soliton profile kappa(s) = (2c/e) sech((c/a)(s-L/2))
    with a = sqrt(1+lam0^2), e = a^2, which is the unique non-constant
    positive profile solving the equilibrium equations at constant lambda;
    the matching multiplier is mu = -2 c^2 e.
    """
    if lam0 == 0.0:
        raise LambdaNotConstant("lam0 must be nonzero for a cylinder geodesic")
    if c <= 0:
        raise ValueError("c must be positive")
    e = 1.0 + lam0 * lam0
    a = np.sqrt(e)
    n = int(round(length / h)) + 1
    s = h * np.arange(n)
    m = c / a
    u = m * (s - length / 2.0)
    sh = 1.0 / np.cosh(u)
    th = np.tanh(u)
    K = 2.0 * c / e
    kappa = K * sh
    k1 = K * m * (-sh * th)
    k2 = K * m**2 * (sh * th**2 - sh**3)
    k3 = K * m**3 * (-sh * th**3 + 5.0 * sh**3 * th)
    z = np.zeros(n)
    profile = CurvatureProfile(
        h=h,
        kappa=kappa,
        lam=np.full(n, float(lam0)),
        dkappa=k1,
        d2kappa=k2,
        d3kappa=k3,
        dlam=z,
        d2lam=z,
        d3lam=z,
        jet_source="analytic",
    )
    from .curves import integrate_frame

    frame = integrate_frame(profile)
    return StripConstruction(
        kind="cylinder_geodesic",
        profile=profile,
        frame=frame,
        mu=-2.0 * c * c * e,
        provenance={"lam0": lam0, "c": c},
    )


# ---------------------------------------------------------------------------
# cylinder-geodesic unrolling
# ---------------------------------------------------------------------------

@dataclass
class PlanarElastica:
    """Planar curve with first integral kappa'^2 + 1/4 kappa^4 + l kappa^2 = E."""

    h: float
    kappa: np.ndarray
    dkappa: np.ndarray
    d2kappa: np.ndarray
    l_planar: float
    E: np.ndarray
    zero_energy: bool
    points: np.ndarray
    axis: np.ndarray

    def first_integral_defect(self) -> float:
        return float(np.abs(self.E - self.E.mean()).max())


def cylinder_geodesic_transform(strip: StripConstruction) -> PlanarElastica:
    """Unroll a constant-lambda strip to the planar elastica it wraps.

    With a = sqrt(1+lam^2) the planar curve is gamma(a s) minus its drift
    (lam/a) s (lam T + B) along the (constant) cylinder axis; its curvature
    is a^2 kappa(a s) and its planar multiplier is mu/(2 a^2).
    """
    lam = strip.profile.lam
    if np.abs(lam - lam[0]).max() > 1e-10 or (
        strip.profile.dlam is not None and np.abs(strip.profile.dlam).max() > 1e-10
    ):
        raise LambdaNotConstant("transform requires constant lambda")
    lam0 = float(lam[0])
    if lam0 == 0.0:
        raise LambdaNotConstant("transform requires nonzero lambda")
    kappa = strip.profile.kappa
    if np.abs(kappa - kappa[0]).max() < 1e-10:
        raise LambdaNotConstant("transform requires non-constant kappa")

    e = 1.0 + lam0 * lam0
    a = np.sqrt(e)
    L = strip.profile.length
    h = strip.profile.h
    s_grid = strip.profile.s
    n_out = int(np.floor(L / a / h)) + 1
    s_out = h * np.arange(n_out)

    kap_sp = CubicSpline(s_grid, kappa)
    dk_sp = CubicSpline(s_grid, strip.profile.dkappa)
    d2k_sp = CubicSpline(s_grid, strip.profile.d2kappa)
    kt = e * kap_sp(a * s_out)
    kt1 = e * a * dk_sp(a * s_out)
    kt2 = e * e * d2k_sp(a * s_out)

    l_planar = strip.mu / (2.0 * e)
    E = kt1**2 + 0.25 * kt**4 + l_planar * kt**2

    axis = (lam0 * strip.frame.T[0] + strip.frame.B[0]) / a
    gam_sp = CubicSpline(s_grid, strip.frame.gamma, axis=0)
    points = gam_sp(a * s_out) - np.outer(
        (lam0 / a) * s_out, lam0 * strip.frame.T[0] + strip.frame.B[0]
    )
    zero_energy = bool(np.abs(E).max() <= 1e-6)
    return PlanarElastica(
        h=h,
        kappa=kt,
        dkappa=kt1,
        d2kappa=kt2,
        l_planar=l_planar,
        E=E,
        zero_energy=zero_energy,
        points=points,
        axis=axis,
    )


# ---------------------------------------------------------------------------
# closed-curve search (heuristic)
# ---------------------------------------------------------------------------

@dataclass
class ClosureCandidate:
    lambda0: float
    A: float
    period: float
    rotation_angle: float
    p: int
    q: int
    mass_center_norm: float
    closure_gap: float
    h: float


def _orbit_period(A: float, order: int = 96) -> float:
    """Exact period of the multiplier-1 oscillator by Gauss-Legendre quadrature.

    Turning amplitude lam* solves 1/4 x^4 + 1/2 x^2 = A; substituting
    lam = lam* sin(theta) removes the endpoint singularity.
    """
    lam_star_sq = -1.0 + np.sqrt(1.0 + 4.0 * A)
    theta, wts = np.polynomial.legendre.leggauss(order)
    theta = 0.25 * np.pi * (theta + 1.0)
    wts = 0.25 * np.pi * wts
    integrand = 1.0 / np.sqrt(0.5 + 0.25 * lam_star_sq * (1.0 + np.sin(theta) ** 2))
    return float(4.0 * np.sum(wts * integrand))


def _rotation_angle(R: np.ndarray) -> float:
    return float(np.arccos(np.clip((np.trace(R) - 1.0) / 2.0, -1.0, 1.0)))


def closure_search(
    params,
    h: float = 1e-3,
    q_max: int = 8,
    angle_tol: float = 1e-2,
    center_tol: float = 1e-2,
) -> list:
    """Scan (lambda0, A) pairs at multiplier 1 for near-closed tangent images.

    For each admissible pair one lambda-period is integrated; a pair is a
    candidate when the frame holonomy angle is commensurate with 2 pi
    (denominator <= q_max within angle_tol) and the mass center of the
    tangent image is small. Candidates are sorted by the closure gap of the
    reconstructed centerline over q periods. Best effort: may return [].
    """
    out = []
    for lambda0, A in params:
        lambda0 = float(lambda0)
        A = float(A)
        if A < 0:
            continue
        if A < 1e-12:
            # lambda identically 0: tangent image is a great circle and the
            # centerline is an exactly closed unit circle
            out.append(
                ClosureCandidate(
                    lambda0=0.0,
                    A=0.0,
                    period=2.0 * np.pi,
                    rotation_angle=0.0,
                    p=0,
                    q=1,
                    mass_center_norm=0.0,
                    closure_gap=0.0,
                    h=h,
                )
            )
            continue
        Veff = 0.25 * lambda0**4 + 0.5 * lambda0**2
        if Veff > A:
            continue
        dlambda0 = np.sqrt(A - Veff)
        period = _orbit_period(A)
        n = max(int(round(period / h)) + 1, 9)
        h_eff = period / (n - 1)
        lam_half, _ = backend.duffing_rk4(
            0.5, lambda0, dlambda0, h_eff / 2.0, 2 * (n - 1)
        )
        ones = np.ones_like(lam_half)
        weight = 1.0 + lam_half**2
        p_pos, T, N, B = transport_frame(
            ones,
            lam_half,
            weight,
            h_eff,
            (0.0, 0.0, 0.0),
            (1.0, 0.0, 0.0),
            (0.0, 1.0, 0.0),
            (0.0, 0.0, 1.0),
        )
        Q0 = np.column_stack([T[0], N[0], B[0]])
        QT = np.column_stack([T[-1], N[-1], B[-1]])
        R = QT @ Q0.T  # ambient holonomy rotation over one period
        angle = _rotation_angle(R)
        frac = Fraction(angle / (2.0 * np.pi)).limit_denominator(q_max)
        angle_gap = abs(angle / (2.0 * np.pi) - float(frac))
        if angle_gap > angle_tol:
            continue
        q = frac.denominator
        # T(t + k period) = R^k T(t): the centerline displacement over the
        # k-th period is R^k of the one-period displacement, the tangent
        # mass center over q periods averages R^k of the one-period mean
        from .curves import quadrature

        w_node = 1.0 + lam_half[::2] ** 2
        disp1 = np.array(
            [quadrature(w_node * T[:, j], h_eff).value for j in range(3)]
        )
        mean1 = np.array([quadrature(T[:, j], h_eff).value for j in range(3)])
        gap_vec = np.zeros(3)
        center_vec = np.zeros(3)
        Rk = np.eye(3)
        for _ in range(q):
            gap_vec += Rk @ disp1
            center_vec += Rk @ mean1
            Rk = Rk @ R
        mc = float(np.linalg.norm(center_vec) / (q * period))
        if mc > center_tol:
            continue
        out.append(
            ClosureCandidate(
                lambda0=lambda0,
                A=A,
                period=period,
                rotation_angle=angle,
                p=frac.numerator,
                q=q,
                mass_center_norm=mc,
                closure_gap=float(np.linalg.norm(gap_vec)),
                h=h,
            )
        )
    out.sort(key=lambda cand: cand.closure_gap)
    return out


def tangent_image(sol: ElasticaSolution):
    """Positions of the tangent indicatrix for a multiplier-1 solution.

    Returns (points, lam) on the t-grid: the sphere curve whose geodesic
    curvature is sol.lam, traversed at unit speed.
    """
    ones = np.ones_like(sol.lam_half)
    _, T, _, _ = transport_frame(
        ones,
        sol.lam_half,
        np.zeros_like(ones),
        sol.h,
        (0.0, 0.0, 0.0),
        (1.0, 0.0, 0.0),
        (0.0, 1.0, 0.0),
        (0.0, 0.0, 1.0),
    )
    return T, sol.lam
