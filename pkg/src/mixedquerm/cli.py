"""Command-line front end.

Exit status: 0 ok, 1 computation error, 2 usage or input error,
3 verification or oracle failure.
"""
import argparse
import io
import json
import math
import sys

import numpy as np

from . import _accel
from .bodyspec import BodySpecError, load_body
from .errors import GeometryError, UnsupportedOperandError
from .geometry import MAX_DIM
from .grassmann import squared_coordinate_moment
from .mixedvol import mixed_volume, mixed_volume_oracle
from .querm import DEFAULT_BALL_POINTS, DEFAULT_SAMPLES, phi, phi_exact_2d, phi_ith, phi_ith_mixed, phi_mixed, phi_pair
from .streams import SampleStream, derive_seed
from .verify import SUITES, SuiteConfig, random_polytope, run_suite

EXIT_OK, EXIT_COMPUTE, EXIT_USAGE, EXIT_FAILED = 0, 1, 2, 3

COMPUTE_COLUMNS = ("value", "std_error", "samples", "n", "j", "seed")
VERIFY_COLUMNS = (
    "name", "instance", "n", "j", "r", "i", "epsilon", "samples", "master_seed",
    "lhs", "rhs", "margin", "noise_bound", "satisfied", "equality_expected",
)
ORACLE_COLUMNS = ("check", "primary", "oracle", "discrepancy", "tolerance", "agree")

MIXEDVOL_TOL = 1e-6
HAAR_N = 3


class UsageError(Exception):
    pass


# --- serialization ----------------------------------------------------------

def _num(x):
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if x is None:
        return "null"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, ".17g")


def _json_obj(record):
    parts = []
    for k, v in record.items():
        text = json.dumps(v) if isinstance(v, str) else _num(v)
        parts.append(f"{json.dumps(k)}: {text}")
    return "{" + ", ".join(parts) + "}"


def _csv_cell(v):
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    return _num(v)


def render(records, columns, fmt, summary=None):
    out = io.StringIO()
    if fmt == "csv":
        out.write(",".join(columns) + "\n")
        for rec in records:
            out.write(",".join(_csv_cell(rec.get(c)) for c in columns) + "\n")
        return out.getvalue()
    if summary is None and len(records) == 1:
        return _json_obj({c: records[0].get(c) for c in columns}) + "\n"
    out.write("{")
    for k, v in (summary or {}).items():
        out.write(f"{json.dumps(k)}: {_num(v)}, ")
    out.write('"records": [\n')
    out.write(",\n".join(_json_obj({c: r.get(c) for c in columns}) for r in records))
    out.write("\n]}\n")
    return out.getvalue()


# --- commands ---------------------------------------------------------------

def _positive(name, value, minimum=1):
    if value < minimum:
        raise UsageError(f"{name} must be at least {minimum}, got {value}")


def cmd_compute(args):
    paths = [p for p in args.bodies.split(",") if p]
    if not paths:
        raise UsageError("--bodies needs at least one file")
    _positive("--samples", args.samples, 2)
    _positive("--ball-points", args.ball_points, 2)
    bodies = [load_body(p) for p in paths]
    n = bodies[0].dim
    if any(b.dim != n for b in bodies):
        raise UsageError(f"bodies live in different dimensions: {[b.dim for b in bodies]}")
    j = args.j
    if args.ith is not None:
        if len(bodies) > 2:
            raise UsageError("--ith takes one body (phi_ith) or two (phi_ith_mixed)")
        if not 0 <= args.ith < j <= n:
            raise UsageError(f"--ith needs 0 <= i < j <= n, got i={args.ith}, j={j}, n={n}")
    elif args.pair:
        if len(bodies) != 2:
            raise UsageError("--pair needs exactly two body files")
        if not 1 <= j <= n:
            raise UsageError(f"-j must satisfy 1 <= j <= n={n}, got {j}")
    elif len(bodies) == 1:
        if not 0 <= j <= n:
            raise UsageError(f"-j must satisfy 0 <= j <= n={n}, got {j}")
    elif len(bodies) != j or j > n:
        raise UsageError(f"{len(bodies)} body files given; a mixed quermassintegral needs j={j} <= n={n} of them")

    kw = dict(samples=args.samples, master_seed=args.seed)
    if args.ith is not None and len(bodies) == 1:
        est = phi_ith(bodies[0], args.ith, j, args.ball_points, **kw)
    elif args.ith is not None:
        est = phi_ith_mixed(bodies[0], bodies[1], args.ith, j, args.ball_points, **kw)
    elif args.pair:
        est = phi_pair(bodies[0], bodies[1], j, **kw)
    elif len(bodies) == 1:
        est = phi(bodies[0], j, **kw)
    else:
        est = phi_mixed(bodies, **kw)
    sys.stdout.write(render([est.as_dict()], COMPUTE_COLUMNS, args.format))
    return EXIT_OK


def cmd_verify(args):
    names = tuple(SUITES) if args.suite == "all" else (args.suite,)
    _positive("-n", args.n)
    if args.n > MAX_DIM:
        raise UsageError(f"-n must be at most {MAX_DIM}, got {args.n}")
    if not 1 <= args.j <= args.n:
        raise UsageError(f"-j must satisfy 1 <= j <= n={args.n}, got {args.j}")
    _positive("--instances", args.instances, 0)
    _positive("--samples", args.samples, 2)
    if "bm" in names and not args.epsilon > 0:
        raise UsageError(f"--epsilon must be positive, got {args.epsilon}")
    if "af" in names and not 0 < args.r <= args.j:
        raise UsageError(f"-r must satisfy 0 < r <= j={args.j}, got {args.r}")
    config = SuiteConfig(
        suites=names,
        instances=args.instances,
        n=args.n,
        j=args.j,
        samples=args.samples,
        seed=args.seed,
        epsilons=(args.epsilon,),
        r=args.r,
        force_homothetic=args.homothetic,
    )
    report = run_suite(config)
    summary = {"seed": report.seed, "satisfied": report.satisfied, "violated": report.violated}
    rows = [r.flat() for r in report.reports]
    sys.stdout.write(render(rows, VERIFY_COLUMNS, args.format, summary=summary))
    if report.violated:
        print(f"mixedquerm: {report.violated} of {len(rows)} instances violated their inequality", file=sys.stderr)
        return EXIT_FAILED
    return EXIT_OK


def _oracle_mixedvol(seed):
    bodies = [random_polytope(SampleStream(seed, k), 3, 6) for k in range(3)]
    primary = mixed_volume(bodies)
    oracle = mixed_volume_oracle(bodies)
    diff = abs(primary - oracle) / abs(oracle)
    return primary, oracle, diff, MIXEDVOL_TOL


def _oracle_phi2d(seed, samples):
    polygon = random_polytope(SampleStream(seed, 0), 2, 5)
    est = phi(polygon, 1, samples, derive_seed(seed, "phi2d"))
    exact = phi_exact_2d(polygon)
    return est.value, exact, abs(est.value - exact), 3 * est.std_error


def _oracle_haar(seed, samples):
    mean, expected, se = squared_coordinate_moment(seed, HAAR_N, samples)
    return mean, expected, abs(mean - expected), 3 * se


def cmd_oracle(args):
    if args.check == "mixedvol":
        primary, oracle, diff, tol = _oracle_mixedvol(args.seed)
    elif args.check == "phi2d":
        samples = DEFAULT_SAMPLES if args.samples is None else args.samples
        _positive("--samples", samples, 2)
        primary, oracle, diff, tol = _oracle_phi2d(args.seed, samples)
    else:
        samples = 100_000 if args.samples is None else args.samples
        _positive("--samples", samples, 2)
        primary, oracle, diff, tol = _oracle_haar(args.seed, samples)
    agree = diff <= tol
    row = dict(check=args.check, primary=primary, oracle=oracle, discrepancy=diff, tolerance=tol, agree=agree)
    sys.stdout.write(render([row], ORACLE_COLUMNS, args.format))
    return EXIT_OK if agree else EXIT_FAILED


def cmd_gen(args):
    if not 1 <= args.dim <= MAX_DIM:
        raise UsageError(f"--dim must be between 1 and {MAX_DIM}, got {args.dim}")
    if args.random:
        if args.vertices is None or args.vertices < args.dim + 1:
            raise UsageError(f"--random needs --vertices >= dim+1={args.dim + 1}")
        body = random_polytope(SampleStream(args.seed), args.dim, args.vertices)
        spec = {"type": "vertices", "dim": args.dim, "points": body.vertices.tolist()}
    elif args.cube:
        if not args.side > 0:
            raise UsageError(f"--side must be positive, got {args.side}")
        spec = {"type": "cube", "dim": args.dim, "side": args.side}
    elif args.simplex:
        spec = {"type": "simplex", "dim": args.dim}
    elif args.ball:
        if not args.radius >= 0:
            raise UsageError(f"--radius must be nonnegative, got {args.radius}")
        spec = {"type": "ball", "dim": args.dim, "radius": args.radius, "center": [0.0] * args.dim}
    else:
        if not args.radius > 0:
            raise UsageError(f"--radius must be positive, got {args.radius}")
        if args.points < args.dim + 1:
            raise UsageError(f"--points must be at least dim+1={args.dim + 1}")
        spec = {"type": "ball_approx", "dim": args.dim, "radius": args.radius, "points": args.points, "seed": args.seed}
    text = _spec_json(spec)
    with open(args.out, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return EXIT_OK


def _spec_json(spec):
    def value(v):
        if isinstance(v, list):
            return "[" + ", ".join(value(x) for x in v) + "]"
        if isinstance(v, str):
            return json.dumps(v)
        return _num(v)

    listed = isinstance(spec.get("points"), list)
    lines = [f"  {json.dumps(k)}: {value(v)}" for k, v in spec.items() if not (listed and k == "points")]
    if listed:
        pts = ",\n".join("    " + value(p) for p in spec["points"])
        lines.append('  "points": [\n' + pts + "\n  ]")
    return "{\n" + ",\n".join(lines) + "\n}\n"


# --- parser -----------------------------------------------------------------

VERIFY_EPILOG = "CSV columns (fixed order): " + ",".join(VERIFY_COLUMNS)


def build_parser():
    parser = argparse.ArgumentParser(prog="mixedquerm", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, samples_default=DEFAULT_SAMPLES):
        p.add_argument("--samples", type=int, default=samples_default, help="Monte Carlo sample count")
        p.add_argument("--seed", type=int, default=0, help="master seed")
        p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--threads", type=int, default=None, help="kernel threads (never changes results)")

    p = sub.add_parser("compute", help="estimate an (mixed) affine quermassintegral",
                       epilog="CSV columns (fixed order): " + ",".join(COMPUTE_COLUMNS))
    p.add_argument("--bodies", required=True, help="comma-separated body files")
    p.add_argument("-j", type=int, required=True, help="subspace dimension")
    p.add_argument("--pair", action="store_true", help="two bodies K, L: Phi(K, ..., K, L)")
    p.add_argument("--ith", type=int, default=None, help="i copies of the unit ball (ball approximant)")
    p.add_argument("--ball-points", type=int, default=DEFAULT_BALL_POINTS)
    common(p)
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("verify", help="check the inequalities on a seeded corpus", epilog=VERIFY_EPILOG)
    p.add_argument("--suite", choices=tuple(SUITES) + ("all",), default="all")
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("-n", type=int, default=3, help="ambient dimension")
    p.add_argument("-j", type=int, default=2, help="subspace dimension")
    p.add_argument("--epsilon", type=float, default=1.0, help="Brunn-Minkowski weight (bm)")
    p.add_argument("-r", type=int, default=2, help="Aleksandrov-Fenchel block size (af)")
    p.add_argument("--homothetic", action="store_true", help="make every minkowski/product/bm instance homothetic")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("oracle", help="cross-check against an independent implementation",
                       epilog="CSV columns (fixed order): " + ",".join(ORACLE_COLUMNS))
    p.add_argument("--check", choices=("mixedvol", "phi2d", "haar"), required=True)
    common(p, samples_default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("gen", help="write a body file")
    p.add_argument("--out", required=True)
    kind = p.add_mutually_exclusive_group(required=True)
    kind.add_argument("--random", action="store_true")
    kind.add_argument("--cube", action="store_true")
    kind.add_argument("--simplex", action="store_true")
    kind.add_argument("--ball", action="store_true")
    kind.add_argument("--ball-approx", action="store_true")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--vertices", type=int, default=None)
    p.add_argument("--side", type=float, default=1.0)
    p.add_argument("--radius", type=float, default=1.0)
    p.add_argument("--points", type=int, default=DEFAULT_BALL_POINTS)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    _accel.set_num_threads(getattr(args, "threads", None))
    try:
        return args.func(args)
    except (UsageError, BodySpecError, UnsupportedOperandError) as exc:
        print(f"mixedquerm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except GeometryError as exc:
        print(f"mixedquerm: computation failed: {exc}", file=sys.stderr)
        return EXIT_COMPUTE


if __name__ == "__main__":
    sys.exit(main())
