"""Command line entry point: ``psl2spectrum {ball,verify,bound}``.

Exit codes: 0 success, 1 usage, 2 resource limit, 3 verification
failure, 4 bound regression.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from . import bounds, cayley, conetypes
from .bounds import Valuation, sig10

EXIT_OK, EXIT_USAGE, EXIT_RESOURCES, EXIT_VERIFY, EXIT_REGRESSION = range(5)

OUTPUT_DIR_ENV = "PSL2SPECTRUM_OUTPUT_DIR"


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _non_negative(text):
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError("must be >= 0")
    return v


def _positive_float(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError("must be > 0")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return v


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--radius", type=_non_negative)
    common.add_argument("--tolerance", type=_positive_float, default=1e-8)
    common.add_argument("--seed", type=int, default=7)
    common.add_argument("--format", choices=("json", "csv", "text"))
    common.add_argument("--output", type=Path,
                        help=f"output file (directory for `ball`); defaults to ${OUTPUT_DIR_ENV}")
    common.add_argument("--threads", type=_positive_int, default=1)

    parser = _Parser(prog="psl2spectrum", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ball", parents=[common], help="build a Cayley ball and export it")
    p.add_argument("--dot", action="store_true", help="also write a DOT graph (radius <= 6)")

    p = sub.add_parser("verify", parents=[common], help="run the verification suites")
    p.add_argument("--mutate", action="store_true",
                   help="self-test: verify against a corrupted table (type 5 -> {3})")

    p = sub.add_parser("bound", parents=[common], help="optimize and certify the lower bound")
    p.add_argument("--upper", action="store_true", help="also compute the Dirichlet upper bound")
    p.add_argument("--check", type=Path, metavar="CERTIFICATE",
                   help="re-verify a stored certificate instead of optimizing")
    return parser


def _round_floats(obj):
    if isinstance(obj, float):
        return sig10(obj)
    if isinstance(obj, dict):
        return {k: _round_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_round_floats(v) for v in obj]
    return obj


def _render(doc: dict, fmt: str) -> str:
    doc = _round_floats(doc)
    if fmt == "json":
        return json.dumps(doc, indent=2) + "\n"
    lines = []
    sep = "," if fmt == "csv" else ": "
    if fmt == "csv":
        lines.append("key,value")
    for key, value in doc.items():
        if isinstance(value, (dict, list)):
            value = json.dumps(value, separators=(",", ":"))
            if fmt == "csv":
                value = '"' + value.replace('"', '""') + '"'
        lines.append(f"{key}{sep}{value}")
    return "\n".join(lines) + "\n"


def _output_dir(args):
    if args.output is not None:
        return args.output
    env = os.environ.get(OUTPUT_DIR_ENV)
    return Path(env) if env else None


def _emit(text: str, args, default_name: str):
    sys.stdout.write(text)
    if args.output is not None:
        target = args.output
    elif os.environ.get(OUTPUT_DIR_ENV):
        target = Path(os.environ[OUTPUT_DIR_ENV]) / default_name
    else:
        return
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text)


def cmd_ball(args) -> int:
    radius = 2 if args.radius is None else args.radius
    if args.dot and radius > 6:
        print("psl2spectrum: --dot is limited to radius <= 6", file=sys.stderr)
        return EXIT_USAGE
    ball = cayley.build_ball(radius)
    fmt = args.format or "csv"
    if fmt == "csv":
        text = cayley.sphere_csv(ball)
    else:
        text = _render({"radius": radius, "nodes": len(ball), "spheres": list(ball.spheres)}, fmt)
    sys.stdout.write(text)
    out = _output_dir(args)
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        (out / f"ball_R{radius}.txt").write_text(cayley.export_ball(ball))
        (out / f"spheres_R{radius}.csv").write_text(cayley.sphere_csv(ball))
        if args.dot:
            (out / f"ball_R{radius}.dot").write_text(cayley.export_dot(ball))
    return EXIT_OK


def run_verification(radius, seed=7, tolerance=1e-8, threads=1, mutate=False) -> dict:
    ball = cayley.build_ball(radius)
    table = dict(conetypes.CONE_TYPE_TABLE)
    if mutate:
        table[5] = (3,)
    compat = conetypes.verify_compatibility(ball, table, threads=threads)

    forbidden = []
    for g in ball:
        for v in cayley.forbidden_suffix_violations(g, ball):
            forbidden.append({"element": str(g), "pair": v})

    try:
        extracted = conetypes.extract_transition_table(ball)
        table_error = None
    except conetypes.InconsistentTyping as exc:
        extracted, table_error = {}, str(exc)
    table_ok = table_error is None and extracted == table

    spheres = list(ball.spheres)
    try:
        automaton = conetypes.automaton_sphere_counts(table, radius)
    except conetypes.InconsistentTyping:
        automaton = None
    geodesics = list(cayley.geodesic_counts(ball))
    paths = conetypes.automaton_path_counts(table, radius)

    optimized = bounds.optimize_valuation(tolerance, seed)
    gg = {}
    for name, c in (("ones", Valuation.ones()), ("optimized", optimized.valuation)):
        gg[name] = bounds.verify_gabber_galil_hypotheses(c, ball).to_dict()

    suites = {
        "compatibility": compat.passed,
        "forbidden_suffixes": not forbidden,
        "transition_table": table_ok,
        "growth": spheres == automaton and geodesics == paths,
        "gabber_galil": all(r["passed"] for r in gg.values()),
    }
    return {
        "radius": radius,
        "seed": seed,
        "passed": all(suites.values()),
        "suites": suites,
        "compatibility": compat.to_dict(),
        "forbidden_suffixes": forbidden,
        "transition_table": {
            "expected": {str(k): list(v) for k, v in sorted(table.items())},
            "extracted": {str(k): list(v) for k, v in extracted.items()},
            "error": table_error,
        },
        "growth": {
            "bfs_spheres": spheres,
            "automaton_spheres": automaton,
            "geodesic_words": geodesics,
            "automaton_paths": paths,
        },
        "gabber_galil": gg,
    }


def cmd_verify(args) -> int:
    if args.radius is None or args.radius < 4:
        print("psl2spectrum verify: --radius >= 4 is required for the full table", file=sys.stderr)
        return EXIT_USAGE
    report = run_verification(args.radius, args.seed, args.tolerance, args.threads, args.mutate)
    fmt = args.format or "json"
    if fmt == "json":
        text = _render(report, "json")
    else:
        summary = {"radius": report["radius"], "passed": report["passed"], **report["suites"]}
        summary["counterexamples"] = report["compatibility"]["counterexamples"][:10]
        text = _render(summary, fmt)
    _emit(text, args, "verify_report.json" if fmt == "json" else f"verify_report.{fmt}")
    return EXIT_OK if report["passed"] else EXIT_VERIFY


def cmd_bound(args) -> int:
    fmt = args.format or "json"
    if args.check is not None:
        try:
            doc = json.loads(args.check.read_text())
            check = bounds.check_certificate(doc)
        except (OSError, ValueError, KeyError, TypeError) as exc:
            print(f"psl2spectrum bound: cannot read certificate: {exc}", file=sys.stderr)
            return EXIT_USAGE
        result = {
            "consistent": check.consistent,
            "mismatches": check.mismatches,
            "certifies": check.certifies,
            "max_f": check.certificate.max_f,
            "lower_bound": check.certificate.lower_bound,
        }
        sys.stdout.write(_render(result, fmt))
        if not check.consistent:
            return EXIT_VERIFY
        return EXIT_OK if check.certifies else EXIT_REGRESSION

    try:
        cert = bounds.optimize_valuation(args.tolerance, args.seed)
    except bounds.BoundRegression as exc:
        print(f"psl2spectrum bound: {exc}", file=sys.stderr)
        return EXIT_REGRESSION
    doc = cert.to_dict()
    doc["tree_upper_bound"] = bounds.tree_upper_bound(bounds.DEGREE)
    if args.upper:
        radius = 10 if args.radius is None else args.radius
        if radius < 2:
            print("psl2spectrum bound: --upper needs --radius >= 2", file=sys.stderr)
            return EXIT_USAGE
        doc["dirichlet_radius"] = radius
        doc["dirichlet_upper_bound"] = bounds.dirichlet_upper_bound(cayley.build_ball(radius))
    _emit(_render(doc, fmt), args, f"certificate.{fmt}")
    return EXIT_OK


COMMANDS = {"ball": cmd_ball, "verify": cmd_verify, "bound": cmd_bound}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except cayley.ResourceLimitError as exc:
        print(f"psl2spectrum: {exc}", file=sys.stderr)
        return EXIT_RESOURCES
    except MemoryError:
        print("psl2spectrum: out of memory", file=sys.stderr)
        return EXIT_RESOURCES


if __name__ == "__main__":
    sys.exit(main())
