"""Command-line front end.

Each subcommand prints one JSON document {command, inputs, results, version}
to stdout, echoing its full effective configuration; identical invocations
produce byte-identical output regardless of SOLENOID_LAB_THREADS. Precondition
violations exit 1 with a one-line diagnostic, I/O failures exit 2.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import box_dimension, entropy_estimate, lyapunov_exponents
from .errors import SolenoidLabError
from .lens import complete_gluing, h1_order, loop_class, transfer_boundary, BoundaryAngles
from .model import OrbitOutcome, build_model, random_manifold_points
from .solenoid import PointCloud, make_solenoid_map, periodic_points, sample_attractor

CLOUD_HEADER = "theta,x,y"


def write_point_cloud(path: str, cloud: PointCloud) -> None:
    """Plain-text cloud: header line, then one decimal triple per line at 17
    significant digits (lossless for doubles)."""
    with open(path, "w", newline="\n") as fh:
        fh.write(CLOUD_HEADER + "\n")
        np.savetxt(fh, cloud.points, fmt="%.17g", delimiter=",")


def read_point_cloud(path: str) -> PointCloud:
    with open(path) as fh:
        header = fh.readline().strip()
        if header != CLOUD_HEADER:
            raise ValueError(f"expected header {CLOUD_HEADER!r}, got {header!r}")
        data = np.loadtxt(fh, delimiter=",", ndmin=2)
    return PointCloud(data)


def _document(command: str, inputs: dict, results: dict) -> str:
    doc = {"command": command, "inputs": inputs, "results": results, "version": __version__}
    return json.dumps(doc, indent=2) + "\n"


def _emit(command: str, inputs: dict, results: dict, out_path: str | None = None) -> None:
    text = _document(command, inputs, results)
    if out_path is not None:
        Path(out_path).write_text(text)
    sys.stdout.write(text)


def _sha256(path: str) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def cmd_verify(args: argparse.Namespace) -> int:
    g = complete_gluing(args.p, args.q)
    det = g.p * g.s - g.q * g.r
    order = h1_order(g)
    core_class = loop_class(g, 1, 0)
    # Exact unimodularity: the integer transfer matrices compose to identity.
    (a, b), (c, d) = g.angle_matrix()
    (e, f), (h, i) = g.angle_matrix_inverse()
    composed = ((a * e + b * h, a * f + b * i), (c * e + d * h, c * f + d * i))
    round_trip_exact = composed == ((1, 0), (0, 1))
    probe = transfer_boundary(g, transfer_boundary(g, BoundaryAngles(0.3, 0.7, 2)))
    ok = (
        det == 1
        and order == g.p
        and round_trip_exact
        and abs(probe.alpha - 0.3) < 1e-12
        and abs(probe.beta - 0.7) < 1e-12
    )
    _emit(
        "verify",
        {"p": args.p, "q": args.q},
        {
            "matrix": {"p": g.p, "q": g.q, "r": g.r, "s": g.s},
            "det": det,
            "h1_order": order,
            "core_class": core_class,
            "knotted": core_class != 0,
            "invariants_ok": ok,
        },
    )
    return 0 if ok else 1


def cmd_attractor(args: argparse.Namespace) -> int:
    smap = make_solenoid_map(args.w, args.eps)
    cloud = sample_attractor(smap, args.depth, args.samples, args.seed)
    write_point_cloud(args.out, cloud)
    _emit(
        "attractor",
        {
            "w": args.w,
            "eps": args.eps,
            "depth": args.depth,
            "samples": args.samples,
            "seed": args.seed,
            "out": args.out,
        },
        {"points": len(cloud), "sha256": _sha256(args.out)},
    )
    return 0


def cmd_periodic(args: argparse.Namespace) -> int:
    smap = make_solenoid_map(args.w, args.eps)
    pts = periodic_points(smap, args.n)
    expected = args.w**args.n - 1
    _emit(
        "periodic",
        {"w": args.w, "eps": args.eps, "n": args.n},
        {
            "count": len(pts),
            "expected": expected,
            "points": [[p.theta, p.x, p.y, period] for p, period in pts],
        },
    )
    return 0 if len(pts) == expected else 1


def cmd_simulate(args: argparse.Namespace) -> int:
    model = build_model(args.p, args.q, args.m, args.eps)
    reference = sample_attractor(model.chart2_map, args.depth, args.samples, args.seed)
    fates = [
        model.classify_orbit(x, args.max_steps, reference)
        for x in random_manifold_points(args.starts, args.seed)
    ]
    fractions = {
        outcome.value: sum(f.kind is outcome for f in fates) / len(fates)
        for outcome in OrbitOutcome
    }
    transits = [f.transit_step for f in fates if f.transit_step is not None]
    _emit(
        "simulate",
        {
            "p": args.p,
            "q": args.q,
            "m": args.m,
            "eps": args.eps,
            "starts": args.starts,
            "max_steps": args.max_steps,
            "seed": args.seed,
            "depth": args.depth,
            "samples": args.samples,
            "out": args.out,
        },
        {
            "fractions": fractions,
            "max_transit_step": max(transits) if transits else None,
        },
        out_path=args.out,
    )
    return 0


def cmd_dimension(args: argparse.Namespace) -> int:
    scales = [float(s) for s in args.scales.split(",") if s]
    cloud = read_point_cloud(getattr(args, "in"))
    report = box_dimension(cloud, scales)
    _emit(
        "dimension",
        {"in": getattr(args, "in"), "scales": scales},
        {
            "scales": list(report.scales),
            "counts": list(report.counts),
            "slope": report.slope,
            "r2": report.r2,
        },
    )
    return 0


def cmd_lyapunov(args: argparse.Namespace) -> int:
    smap = make_solenoid_map(args.w, args.eps)
    exps = lyapunov_exponents(smap, steps=args.steps)
    _emit(
        "lyapunov",
        {"w": args.w, "eps": args.eps, "steps": args.steps},
        {
            "exponents": [float(v) for v in exps],
            "reference": [math.log(args.w), -2 * math.log(args.w), -2 * math.log(args.w)],
        },
    )
    return 0


def cmd_entropy(args: argparse.Namespace) -> int:
    smap = make_solenoid_map(args.w, args.eps)
    estimate = entropy_estimate(smap, args.n_max)
    _emit(
        "entropy",
        {"w": args.w, "eps": args.eps, "n_max": args.n_max},
        {"estimate": estimate, "reference": math.log(args.w)},
    )
    return 0


class _Parser(argparse.ArgumentParser):
    # Spec: malformed invocations are precondition violations -> exit 1.
    def error(self, message: str) -> None:  # type: ignore[override]
        self.exit(1, f"error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="solenoid-lab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_verify = sub.add_parser("verify", help="check the gluing algebra for L(p, q)")
    p_verify.add_argument("--p", type=int, required=True)
    p_verify.add_argument("--q", type=int, required=True)
    p_verify.set_defaults(func=cmd_verify)

    p_attr = sub.add_parser("attractor", help="sample the limit set to a cloud file")
    p_attr.add_argument("--w", type=int, required=True)
    p_attr.add_argument("--eps", type=float, default=0.5)
    p_attr.add_argument("--depth", type=int, default=40)
    p_attr.add_argument("--samples", type=int, default=100_000)
    p_attr.add_argument("--seed", type=int, default=0)
    p_attr.add_argument("--out", required=True)
    p_attr.set_defaults(func=cmd_attractor)

    p_per = sub.add_parser("periodic", help="enumerate points fixed by the n-th iterate")
    p_per.add_argument("--w", type=int, required=True)
    p_per.add_argument("--eps", type=float, default=0.5)
    p_per.add_argument("--n", type=int, required=True)
    p_per.set_defaults(func=cmd_periodic)

    p_sim = sub.add_parser("simulate", help="classify seeded orbits of the glued model")
    p_sim.add_argument("--p", type=int, required=True)
    p_sim.add_argument("--q", type=int, required=True)
    p_sim.add_argument("--m", type=int, default=1)
    p_sim.add_argument("--eps", type=float, default=0.5)
    p_sim.add_argument("--starts", type=int, default=1000)
    p_sim.add_argument("--max-steps", type=int, default=60)
    p_sim.add_argument("--seed", type=int, default=0)
    p_sim.add_argument("--depth", type=int, default=25, help="reference cloud depth")
    p_sim.add_argument("--samples", type=int, default=20_000, help="reference cloud size")
    p_sim.add_argument("--out", default=None)
    p_sim.set_defaults(func=cmd_simulate)

    p_dim = sub.add_parser("dimension", help="box-counting dimension of a cloud file")
    p_dim.add_argument("--in", required=True)
    p_dim.add_argument("--scales", required=True, help="comma-separated box edges")
    p_dim.set_defaults(func=cmd_dimension)

    p_lya = sub.add_parser("lyapunov", help="Lyapunov spectrum of the embedding")
    p_lya.add_argument("--w", type=int, required=True)
    p_lya.add_argument("--eps", type=float, default=0.5)
    p_lya.add_argument("--steps", type=int, default=10_000)
    p_lya.set_defaults(func=cmd_lyapunov)

    p_ent = sub.add_parser("entropy", help="periodic-orbit entropy estimate")
    p_ent.add_argument("--w", type=int, required=True)
    p_ent.add_argument("--eps", type=float, default=0.5)
    p_ent.add_argument("--n-max", type=int, required=True)
    p_ent.set_defaults(func=cmd_entropy)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SolenoidLabError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
