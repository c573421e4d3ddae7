"""Command-line interface.

Exit codes: 0 success, 1 certification failure, 2 usage or parse error,
3 domain or guard error. The environment variable STRIPFORGE_TOL overrides
the default residual tolerance bundle (drift tolerance is a tenth of it).
"""
from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import io as sfio
from .curves import differentiate_profile
from .errors import StripforgeError
from .integrable import (
    build_cylinder_geodesic,
    build_force_free,
    build_helix,
    build_momentum,
    closure_search,
)
from .surface import build_mesh, export_obj
from .variational import (
    certify,
    fd_energy_variation,
    first_variation,
    random_compact_field,
    sadowsky_energy,
)

EXIT_OK = 0
EXIT_CERTIFICATION = 1
EXIT_USAGE = 2
EXIT_DOMAIN = 3

DEFAULT_RESIDUAL_TOL = 1e-5


def default_tolerance() -> float:
    raw = os.environ.get("STRIPFORGE_TOL")
    if raw is None:
        return DEFAULT_RESIDUAL_TOL
    try:
        value = float(raw)
    except ValueError as exc:
        raise ValueError(f"STRIPFORGE_TOL is not a number: {raw!r}") from exc
    if value <= 0:
        raise ValueError("STRIPFORGE_TOL must be positive")
    return value


def _positive(name: str):
    def parse(raw: str) -> float:
        value = float(raw)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"{name} must be positive")
        return value

    return parse


def _emit(args, human: str, payload: dict) -> None:
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        print(human)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="stripforge",
        description="Elastic developable strips: solve, build, verify, mesh.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("elastica", help="integrate the spherical-elastica ODE")
    p.add_argument("--l", type=float, required=True)
    p.add_argument("--lambda0", type=float, required=True)
    p.add_argument("--dlambda0", type=float, default=0.0)
    p.add_argument("--length", type=_positive("length"), required=True)
    p.add_argument("--h", type=_positive("h"), default=1e-3)
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("build", help="construct an elastic strip")
    p.add_argument(
        "--kind",
        required=True,
        choices=["force-free", "momentum", "helix", "cylinder-geodesic"],
    )
    p.add_argument("--solution", help="solution CSV (force-free / momentum)")
    p.add_argument("--mu", type=float)
    p.add_argument("--kappa", type=float)
    p.add_argument("--lambda", dest="lam", type=float)
    p.add_argument("--lambda0", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--length", type=_positive("length"), default=10.0)
    p.add_argument("--h", type=_positive("h"), default=1e-3)
    p.add_argument("--h-out", type=_positive("h-out"))
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("verify", help="certify a strip bundle")
    p.add_argument("--bundle", required=True)
    p.add_argument("--mu", type=float)
    p.add_argument("--tol", type=_positive("tol"))
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("mesh", help="export a ruled strip mesh as OBJ")
    p.add_argument("--bundle", required=True)
    p.add_argument("--width", type=_positive("width"), required=True)
    p.add_argument("--rulings", type=int, default=4)
    p.add_argument("--out", required=True)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("energy", help="evaluate the bending energy")
    p.add_argument("--bundle", required=True)
    p.add_argument("--mu", type=float)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("pfunc", help="reduced functional on the tangent image")
    p.add_argument("--bundle", required=True)
    p.add_argument("--mu", type=float)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser(
        "variation-check", help="analytic first variation vs finite differences"
    )
    p.add_argument("--bundle", required=True)
    p.add_argument("--mu", type=float)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--trials", type=int, default=5)
    p.add_argument("--eps", type=_positive("eps"), default=1e-4)
    p.add_argument("--tol", type=_positive("tol"), default=1e-2)
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("closure-search", help="scan for near-closed strips")
    p.add_argument("--amin", type=float, required=True)
    p.add_argument("--amax", type=float, required=True)
    p.add_argument("--count", type=int, default=20)
    p.add_argument("--h", type=_positive("h"), default=1e-3)
    p.add_argument("--angle-tol", type=_positive("angle-tol"), default=1e-2)
    p.add_argument("--center-tol", type=_positive("center-tol"), default=1e-2)
    p.add_argument("--json", action="store_true")
    return parser


def _load_profile_frame(args, need_mu: bool = True):
    frame, profile, meta = sfio.read_strip_bundle(args.bundle)
    profile = differentiate_profile(profile)
    frame.profile = profile
    mu = getattr(args, "mu", None)
    if mu is None:
        mu = meta.get("mu")
    if mu is None:
        if need_mu:
            raise ValueError("mu not in bundle metadata; pass --mu")
        return frame, profile, None, meta
    return frame, profile, float(mu), meta


def cmd_elastica(args) -> int:
    from .integrable import solve_spherical_elastica

    sol = solve_spherical_elastica(
        args.l, args.lambda0, args.dlambda0, args.length, args.h
    )
    if args.out:
        sfio.write_solution(args.out, sol)
    _emit(
        args,
        f"A = {sol.A:.12g}\nperiod_estimate = {sol.period_estimate}",
        {"A": sol.A, "period_estimate": sol.period_estimate, "n": sol.n},
    )
    return EXIT_OK


def cmd_build(args) -> int:
    if args.kind in ("force-free", "momentum"):
        if not args.solution:
            raise ValueError(f"--kind {args.kind} requires --solution")
        sol = sfio.read_solution(args.solution)
        if args.kind == "force-free":
            strip = build_force_free(sol, h_out=args.h_out)
        else:
            strip = build_momentum(sol, mu=args.mu, h_out=args.h_out)
    elif args.kind == "helix":
        if args.kappa is None or args.lam is None:
            raise ValueError("--kind helix requires --kappa and --lambda")
        strip = build_helix(args.kappa, args.lam, length=args.length, h=args.h)
    else:
        if args.lambda0 is None or args.c is None:
            raise ValueError("--kind cylinder-geodesic requires --lambda0 and --c")
        strip = build_cylinder_geodesic(
            args.lambda0, args.c, length=args.length, h=args.h
        )
    sfio.write_strip_bundle(args.out, strip)
    _emit(
        args,
        f"kind = {strip.kind}\nmu = {strip.mu:.12g}\nn = {strip.profile.n}",
        {"kind": strip.kind, "mu": strip.mu, "n": strip.profile.n},
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    frame, profile, mu, _ = _load_profile_frame(args)
    tol = args.tol if args.tol is not None else default_tolerance()
    cert = certify(profile, mu, frame, residual_tol=tol, drift_tol=tol / 10.0)
    payload = cert.as_dict()
    sfio.write_report(args.out, payload)
    human = "\n".join(f"{k} = {v}" for k, v in payload.items())
    _emit(args, human, payload)
    return EXIT_OK if cert.passed else EXIT_CERTIFICATION


def cmd_mesh(args) -> int:
    frame, profile, _, _ = _load_profile_frame(args, need_mu=False)
    try:
        mesh = build_mesh(frame, profile, args.width, args.rulings)
    except StripforgeError as exc:
        bound = getattr(exc, "bound", None)
        if bound is not None:
            print(f"error: {exc} (bound = {bound:.12g})", file=sys.stderr)
            return EXIT_DOMAIN
        raise
    with open(args.out, "wb") as fh:
        fh.write(export_obj(mesh))
    _emit(
        args,
        f"vertices = {mesh.n * mesh.columns}\n"
        f"developability_defect = {mesh.developability_defect:.6g}",
        {
            "vertices": mesh.n * mesh.columns,
            "developability_defect": mesh.developability_defect,
        },
    )
    return EXIT_OK


def cmd_energy(args) -> int:
    frame, profile, mu, _ = _load_profile_frame(args)
    report = sadowsky_energy(profile, mu)
    _emit(
        args,
        f"S_mu = {report.S_mu:.12g}\nlength = {report.length:.12g}\nmu = {mu:.12g}",
        {"S_mu": report.S_mu, "length": report.length, "mu": mu},
    )
    return EXIT_OK


def cmd_pfunc(args) -> int:
    from .integrable import StripConstruction
    from .pfunctional import (
        multipliers_from_strip,
        p_functional,
        tangent_image_of_strip,
    )

    frame, profile, mu, meta = _load_profile_frame(args)
    strip = StripConstruction(
        kind=meta.get("kind", "unknown"), profile=profile, frame=frame, mu=mu
    )
    mu_p, b0 = multipliers_from_strip(strip)
    tangent = tangent_image_of_strip(strip)
    report = p_functional(tangent, b0, mu_p)
    s_mu = sadowsky_energy(profile, mu).S_mu
    # P differs from S_mu by the endpoint term of the b0 constraint
    endpoint = float(b0 @ (frame.gamma[-1] - frame.gamma[0]))
    rel = abs(report.P - s_mu - endpoint) / max(abs(s_mu), 1e-30)
    _emit(
        args,
        f"P = {report.P:.12g}\nS_mu = {s_mu:.12g}\n"
        f"endpoint_term = {endpoint:.12g}\nconsistency_gap = {rel:.6g}",
        {
            "P": report.P,
            "S_mu": s_mu,
            "endpoint_term": endpoint,
            "consistency_gap": rel,
            "b0": list(b0),
        },
    )
    return EXIT_OK


def cmd_variation_check(args) -> int:
    frame, profile, mu, _ = _load_profile_frame(args)
    rng = np.random.default_rng(args.seed)
    # floor the denominator at a fraction of the energy scale: on elastic
    # strips both sides are ~0 and a pure relative error is meaningless
    floor = 1e-3 * max(abs(sadowsky_energy(profile, mu).S_mu), 1.0)
    worst = 0.0
    for _ in range(args.trials):
        field, U = random_compact_field(profile, frame, rng)
        analytic = first_variation(profile, frame, field, mu).dS
        oracle = fd_energy_variation(frame, mu, U[0], eps=args.eps)
        scale = max(abs(analytic), abs(oracle), floor)
        worst = max(worst, abs(analytic - oracle) / scale)
    _emit(
        args,
        f"trials = {args.trials}\nmax_relative_error = {worst:.6g}",
        {"trials": args.trials, "max_relative_error": worst},
    )
    return EXIT_OK if worst <= args.tol else EXIT_CERTIFICATION


def cmd_closure_search(args) -> int:
    grid = np.linspace(args.amin, args.amax, args.count)
    cands = closure_search(
        [(0.0, A) for A in grid],
        h=args.h,
        angle_tol=args.angle_tol,
        center_tol=args.center_tol,
    )
    payload = [
        {
            "A": c.A,
            "period": c.period,
            "p": c.p,
            "q": c.q,
            "rotation_angle": c.rotation_angle,
            "mass_center_norm": c.mass_center_norm,
            "closure_gap": c.closure_gap,
        }
        for c in cands
    ]
    if getattr(args, "json", False):
        print(json.dumps(payload, sort_keys=True))
    else:
        if not cands:
            print("no candidates")
        for c in cands:
            print(
                f"A = {c.A:.6g}  p/q = {c.p}/{c.q}  "
                f"gap = {c.closure_gap:.6g}  |center| = {c.mass_center_norm:.6g}"
            )
    return EXIT_OK


COMMANDS = {
    "elastica": cmd_elastica,
    "build": cmd_build,
    "verify": cmd_verify,
    "mesh": cmd_mesh,
    "energy": cmd_energy,
    "pfunc": cmd_pfunc,
    "variation-check": cmd_variation_check,
    "closure-search": cmd_closure_search,
}


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    try:
        return COMMANDS[args.command](args)
    except StripforgeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
