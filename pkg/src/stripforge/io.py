"""Deterministic file formats: curve/profile CSV, solution and strip bundles.

All floats are written with 17 significant digits (lossless round trip for
binary64). Metadata travels in a JSON sidecar named <file>.meta.json.
"""
from __future__ import annotations

import json
import os
from typing import Optional, Tuple

import numpy as np

from .curves import CurvatureProfile, FramedCurve
from .integrable import ElasticaSolution, StripConstruction, solve_spherical_elastica

CURVE_HEADER = "s,x,y,z,Tx,Ty,Tz,Nx,Ny,Nz,Bx,By,Bz,kappa,lambda"
PROFILE_HEADER = "s,kappa,lambda"
SOLUTION_HEADER = "t,lambda,dlambda"


def _fmt_row(values) -> str:
    return ",".join(f"{v:.17g}" for v in values)


def _meta_path(path: str) -> str:
    return path + ".meta.json"


def _write_json(path: str, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


# ---------------------------------------------------------------------------
# curve / profile CSV
# ---------------------------------------------------------------------------

def write_curve_csv(path: str, frame: FramedCurve, profile: CurvatureProfile) -> None:
    with open(path, "w") as fh:
        fh.write(CURVE_HEADER + "\n")
        s = profile.s
        for i in range(profile.n):
            row = np.concatenate(
                [
                    [s[i]],
                    frame.gamma[i],
                    frame.T[i],
                    frame.N[i],
                    frame.B[i],
                    [profile.kappa[i], profile.lam[i]],
                ]
            )
            fh.write(_fmt_row(row) + "\n")


def read_curve_csv(path: str) -> Tuple[FramedCurve, CurvatureProfile]:
    with open(path) as fh:
        header = fh.readline().strip()
        if header != CURVE_HEADER:
            raise ValueError(f"bad curve CSV header: {header!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[1] != 15:
        raise ValueError("curve CSV must have 15 columns")
    s = data[:, 0]
    steps = np.diff(s)
    if s.size < 2 or np.abs(steps - steps[0]).max() > 1e-9 * max(abs(s[-1]), 1.0):
        raise ValueError("curve CSV grid must be uniform")
    h = float(steps[0])
    profile = CurvatureProfile(h=h, kappa=data[:, 13], lam=data[:, 14])
    frame = FramedCurve(
        h=h,
        gamma=data[:, 1:4],
        T=data[:, 4:7],
        N=data[:, 7:10],
        B=data[:, 10:13],
        profile=profile,
    )
    return frame, profile


def write_profile_csv(path: str, profile: CurvatureProfile) -> None:
    with open(path, "w") as fh:
        fh.write(PROFILE_HEADER + "\n")
        for si, ki, li in zip(profile.s, profile.kappa, profile.lam):
            fh.write(_fmt_row([si, ki, li]) + "\n")


def read_profile_csv(path: str) -> CurvatureProfile:
    with open(path) as fh:
        header = fh.readline().strip()
        if header != PROFILE_HEADER:
            raise ValueError(f"bad profile CSV header: {header!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[1] != 3:
        raise ValueError("profile CSV must have 3 columns")
    h = float(data[1, 0] - data[0, 0])
    return CurvatureProfile(h=h, kappa=data[:, 1], lam=data[:, 2])


# ---------------------------------------------------------------------------
# elastica solutions
# ---------------------------------------------------------------------------

def write_solution(path: str, sol: ElasticaSolution) -> None:
    with open(path, "w") as fh:
        fh.write(SOLUTION_HEADER + "\n")
        for ti, li, di in zip(sol.t, sol.lam, sol.dlam):
            fh.write(_fmt_row([ti, li, di]) + "\n")
    _write_json(
        _meta_path(path),
        {
            "l": sol.l,
            "A": sol.A,
            "h": sol.h,
            "n": sol.n,
            "period_estimate": sol.period_estimate,
        },
    )


def read_solution(path: str) -> ElasticaSolution:
    """Rebuild a solution from file by re-running the deterministic integrator.

    The stored node values seed and cross-check the rebuild; the half-grid
    state (needed by the strip constructors) is regenerated bit-identically.
    """
    with open(_meta_path(path)) as fh:
        meta = json.load(fh)
    with open(path) as fh:
        header = fh.readline().strip()
        if header != SOLUTION_HEADER:
            raise ValueError(f"bad solution CSV header: {header!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    if data.shape[1] != 3:
        raise ValueError("solution CSV must have 3 columns")
    h = float(meta["h"])
    n = int(meta["n"])
    if data.shape[0] != n:
        raise ValueError("solution CSV row count disagrees with metadata")
    sol = solve_spherical_elastica(
        float(meta["l"]), float(data[0, 1]), float(data[0, 2]), h * (n - 1), h
    )
    if np.abs(sol.lam - data[:, 1]).max() > 1e-12:
        raise ValueError("solution file is not reproducible from its initial data")
    return sol


# ---------------------------------------------------------------------------
# strip bundles
# ---------------------------------------------------------------------------

def write_strip_bundle(path: str, strip: StripConstruction) -> None:
    write_curve_csv(path, strip.frame, strip.profile)
    meta = {
        "kind": strip.kind,
        "mu": strip.mu,
        "h": strip.profile.h,
        "n": strip.profile.n,
    }
    sol = strip.provenance.get("solution")
    if isinstance(sol, ElasticaSolution):
        meta["l"] = sol.l
        meta["A"] = sol.A
    _write_json(_meta_path(path), meta)


def read_strip_bundle(path: str) -> Tuple[FramedCurve, CurvatureProfile, dict]:
    frame, profile = read_curve_csv(path)
    meta_file = _meta_path(path)
    meta = {}
    if os.path.exists(meta_file):
        with open(meta_file) as fh:
            meta = json.load(fh)
    return frame, profile, meta


def write_report(path: Optional[str], payload: dict) -> None:
    if path:
        _write_json(path, payload)
