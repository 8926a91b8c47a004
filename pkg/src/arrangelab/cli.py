"""Command-line front end.

Commands: generate | solve | verify-bounds | render | export.
Exit codes: 0 ok, 1 bound violation, 2 input/limit error, 3 a solver emitted
a certificate that failed validation (a bug guard, never silent).
The ARRANGE_LAB_LIMIT environment variable overrides exact-solver limits.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .arrangement import build
from .constructions import chain_L, convex_position, gadget_G, random_simple
from .errors import (
    ArrangeLabError,
    GenerationExhausted,
    LimitExceeded,
    MalformedCertificate,
    NotConvexPosition,
    NotSimple,
    TooLarge,
)
from .heuristics import (
    alternating_convex_coloring,
    greedy_maximal_is_lines,
    iterated_is_coloring,
    pair_cell_cover,
    parity_cell_coloring,
    refined_cell_cover,
    sweep_vertex_coloring,
    vertex_guards,
)
from .hypergraph import (
    Certificate,
    cell_zone,
    exact_chromatic_number,
    exact_max_independent_set,
    exact_min_vertex_cover,
    line_cell,
    validate,
    vertex_cell,
)
from .jsonio import lines_from_payload, lines_payload, metadata_block, read_json, write_json
from .render import render_svg
from .report import ALL_FAMILIES, HarnessConfig, run_verify_bounds, write_figures, write_summary_csv

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2
EXIT_CERTIFICATE = 3


def _emit(payload: dict, out: str | None) -> None:
    if out:
        write_json(out, payload)
    else:
        from .jsonio import dumps

        sys.stdout.write(dumps(payload))


def cmd_generate(args) -> int:
    command = "generate " + args.generator
    extra: dict = {}
    try:
        if args.generator == "random":
            lines = random_simple(args.n, seed=args.seed, coeff_bound=args.coeff_bound)
            meta = metadata_block(command, seed=args.seed, n=args.n, coeff_bound=args.coeff_bound)
        elif args.generator == "convex":
            lines = convex_position(args.n)
            meta = metadata_block(command, n=args.n)
        elif args.generator == "gadget":
            gadget = gadget_G(args.q, limit=args.limit)
            lines = list(gadget.lines)
            extra["witness"] = list(gadget.witness.snapshot_indices)
            extra["witness_bound_ok"] = gadget.witness_bound_ok
            meta = metadata_block(command, q=args.q)
        else:  # chain
            inst = chain_L(args.k, args.level, limit=args.limit)
            lines = list(inst.lines)
            extra["copy_map"] = list(inst.copy_map)
            extra["witness"] = [str(x) for x in inst.witness_tail]
            meta = metadata_block(command, k=args.k, level=args.level)
    except (GenerationExhausted, LimitExceeded, ValueError) as exc:
        print(f"generate: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(lines_payload(lines, metadata=meta, **extra), args.out)
    return EXIT_OK


_SOLVERS = {
    ("line-cell", "independent-set", "greedy"),
    ("line-cell", "independent-set", "exact"),
    ("line-cell", "cover", "exact"),
    ("line-cell", "chromatic", "iterated-is"),
    ("line-cell", "chromatic", "exact"),
    ("line-cell", "chromatic", "alternating"),
    ("vertex-cell", "coloring", "sweep"),
    ("vertex-cell", "cover", "sweep-guards"),
    ("vertex-cell", "cover", "exact"),
    ("cell-zone", "coloring", "parity"),
    ("cell-zone", "cover", "pairs"),
    ("cell-zone", "cover", "refined"),
    ("cell-zone", "cover", "exact"),
}

_DOMAIN = {"line-cell": "lines", "vertex-cell": "vertices", "cell-zone": "cells"}


def cmd_solve(args) -> int:
    triple = (args.hypergraph, args.problem, args.algo)
    if triple not in _SOLVERS:
        print(f"solve: unsupported combination {triple}", file=sys.stderr)
        return EXIT_INPUT
    try:
        payload = read_json(args.input)
        lines = lines_from_payload(payload)
        arr = build(lines)
    except (ArrangeLabError, KeyError, ValueError, OSError) as exc:
        print(f"solve: {exc}", file=sys.stderr)
        return EXIT_INPUT

    limit = args.limit_exact
    trace = None
    metrics: dict = {}
    extra: dict = {}
    try:
        if triple == ("line-cell", "independent-set", "greedy"):
            res = greedy_maximal_is_lines(arr, order_seed=args.seed)
            cert, trace, metrics = res.result, res, res.metrics
            hg = line_cell(arr)
        elif triple == ("line-cell", "independent-set", "exact"):
            hg = line_cell(arr)
            cert = exact_max_independent_set(hg, limit=limit)
            metrics = {"size": cert.size}
        elif triple == ("line-cell", "cover", "exact"):
            hg = line_cell(arr)
            cert = exact_min_vertex_cover(hg, limit=limit)
            metrics = {"size": cert.size}
        elif triple == ("line-cell", "chromatic", "iterated-is"):
            res = iterated_is_coloring(lines)
            cert, trace, metrics = res.result, res, res.metrics
            hg = line_cell(arr)
        elif triple == ("line-cell", "chromatic", "exact"):
            hg = line_cell(arr)
            chi, cert = exact_chromatic_number(hg, limit=limit)
            metrics = {"chromatic_number": chi}
        elif triple == ("line-cell", "chromatic", "alternating"):
            cert = alternating_convex_coloring(lines)
            hg = line_cell(arr)
            metrics = {"colors_used": cert.num_colors}
        elif triple == ("vertex-cell", "coloring", "sweep"):
            res = sweep_vertex_coloring(arr)
            cert, trace, metrics = res.three_coloring, res.trace, dict(res.trace.metrics)
            extra["two_coloring"] = res.two_coloring.to_json()
            hg = vertex_cell(arr, 3)
        elif triple == ("vertex-cell", "cover", "sweep-guards"):
            res = vertex_guards(arr)
            cert, trace, metrics = res.result, res, res.metrics
            hg = vertex_cell(arr, 2)
        elif triple == ("vertex-cell", "cover", "exact"):
            hg = vertex_cell(arr, 2)
            cert = exact_min_vertex_cover(hg, limit=limit)
            metrics = {"size": cert.size}
        elif triple == ("cell-zone", "coloring", "parity"):
            cert = parity_cell_coloring(arr)
            hg = cell_zone(arr)
            metrics = {"colors_used": cert.num_colors}
        elif triple == ("cell-zone", "cover", "pairs"):
            res = pair_cell_cover(arr)
            cert, trace, metrics = res.result, res, res.metrics
            hg = cell_zone(arr)
        elif triple == ("cell-zone", "cover", "refined"):
            res = refined_cell_cover(arr)
            cert, trace, metrics = res.result, res, res.metrics
            hg = cell_zone(arr)
        else:  # ("cell-zone", "cover", "exact")
            hg = cell_zone(arr)
            cert = exact_min_vertex_cover(hg, limit=limit)
            metrics = {"size": cert.size}
    except TooLarge as exc:
        print(f"solve: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except NotConvexPosition as exc:
        print(f"solve: {exc}", file=sys.stderr)
        return EXIT_INPUT

    report = validate(hg, cert)
    result = {
        "metadata": metadata_block(
            "solve", seed=args.seed, hypergraph=args.hypergraph,
            problem=args.problem, algo=args.algo, limit_exact=args.limit_exact,
        ),
        "domain": _DOMAIN[args.hypergraph],
        "certificate": cert.to_json(),
        "metrics": metrics,
        "validation": {
            "ok": report.ok,
            "violations": [
                {"edge": list(v.edge), "labels": list(v.labels), "reason": v.reason}
                for v in report.violations[:20]
            ],
        },
        "trace": list(trace.steps) if hasattr(trace, "steps") and trace is not None else None,
    }
    _emit(result, args.out)
    if not report.ok and args.algo != "alternating":
        # A heuristic emitted an invalid certificate: internal bug guard.
        print(f"solve: certificate failed validation: {report}", file=sys.stderr)
        return EXIT_CERTIFICATE
    if not report.ok:
        # Alternating coloring on an odd tangent family is improper by
        # geometry; the verdict is in the payload, not an internal error.
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_verify_bounds(args) -> int:
    families = tuple(args.only.split(",")) if args.only else ALL_FAMILIES
    unknown = set(families) - set(ALL_FAMILIES)
    if unknown:
        print(f"verify-bounds: unknown families {sorted(unknown)}", file=sys.stderr)
        return EXIT_INPUT
    cfg = HarnessConfig(
        trials=args.trials,
        n_min=args.n if args.n is not None else args.n_min,
        n_max=args.n if args.n is not None else args.n_max,
        seed=args.seed,
        coeff_bound=args.coeff_bound,
        exact_limit=args.limit_exact,
        guard_trials=args.guard_trials,
        chain_samples=args.chain_samples,
        families=families,
        workers=args.workers,
    )
    report = run_verify_bounds(cfg)
    report["metadata"] = metadata_block(
        "verify-bounds", seed=args.seed, trials=args.trials,
        families=",".join(families), workers=args.workers,
    )
    outdir = Path(args.out) if args.out else Path("verify-bounds-out")
    outdir.mkdir(parents=True, exist_ok=True)
    write_json(outdir / "report.json", report)
    write_summary_csv(report, outdir / "summary.csv")
    for violation in report["violations"]:
        if violation.get("instance"):
            name = f'violation-{violation["family"]}-{violation["name"]}-{violation["trial"]}.json'
            write_json(outdir / name, violation["instance"])
    if not args.no_figures:
        write_figures(cfg, outdir / "figures")
    for key in sorted(report["summary"]):
        entry = report["summary"][key]
        status = "PASS" if entry["fail"] == 0 or entry.get("rate_ok") else "FAIL"
        rate = f' rate={entry["rate"]}' if "rate" in entry else ""
        print(f'{status} {key}: pass={entry["pass"]} fail={entry["fail"]}{rate}')
    print(f'verify-bounds: {"ok" if report["ok"] else "VIOLATIONS FOUND"} -> {outdir}')
    return EXIT_OK if report["ok"] else EXIT_VIOLATION


def cmd_render(args) -> int:
    try:
        payload = read_json(args.input)
        lines = lines_from_payload(payload)
        arr = build(lines)
    except (ArrangeLabError, KeyError, ValueError, OSError) as exc:
        print(f"render: {exc}", file=sys.stderr)
        return EXIT_INPUT
    cert = None
    domain = args.domain
    if args.certificate:
        try:
            cpayload = read_json(args.certificate)
            if "certificate" in cpayload:
                domain = domain or cpayload.get("domain")
                cpayload = cpayload["certificate"]
            cert = Certificate.from_json(cpayload)
        except (ArrangeLabError, KeyError, ValueError, OSError) as exc:
            print(f"render: bad certificate: {exc}", file=sys.stderr)
            return EXIT_INPUT
    if getattr(args, "format", None) == "json":
        payload = {"arrangement": arr.to_json(), "domain": domain}
        if cert is not None:
            payload["certificate"] = cert.to_json()
        _emit(payload, args.out)
        return EXIT_OK
    try:
        svg = render_svg(arr, certificate=cert, domain=domain, size=args.size)
    except MalformedCertificate as exc:
        print(f"render: {exc}", file=sys.stderr)
        return EXIT_INPUT
    if args.out:
        Path(args.out).write_text(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


def cmd_export(args) -> int:
    try:
        payload = read_json(args.input)
        lines = lines_from_payload(payload)
        arr = build(lines)
    except (NotSimple, ArrangeLabError, KeyError, ValueError, OSError) as exc:
        print(f"export: {exc}", file=sys.stderr)
        return EXIT_INPUT
    _emit(arr.to_json(), args.out)
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="arrangelab",
        description="Exact line arrangements: hypergraphs, colorings, guards, bounds.",
    )
    parser.add_argument("--version", action="version", version=f"arrangelab {__version__}")
    parser.add_argument(
        "--format",
        choices=["json", "svg"],
        default=None,
        help="output format; svg applies to render only (default: json, render: svg)",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate instance files")
    gen.add_argument("generator", choices=["random", "convex", "gadget", "chain"])
    gen.add_argument("-n", type=int, default=6, help="number of lines (random/convex)")
    gen.add_argument("-q", type=int, default=2, help="gadget doubling depth")
    gen.add_argument("-k", type=int, default=1, help="chain color budget")
    gen.add_argument("-i", "--level", type=int, default=0, help="chain level")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--coeff-bound", type=int, default=100)
    gen.add_argument("--limit", type=int, default=64, help="gadget/chain size limit")
    gen.add_argument("--out", default=None)
    gen.set_defaults(func=cmd_generate)

    solve = sub.add_parser("solve", help="run an algorithm on an instance")
    solve.add_argument("--hypergraph", choices=["line-cell", "vertex-cell", "cell-zone"],
                       default="line-cell")
    solve.add_argument("--problem",
                       choices=["independent-set", "cover", "chromatic", "coloring"],
                       required=True)
    solve.add_argument("--algo", required=True)
    solve.add_argument("--in", dest="input", required=True)
    solve.add_argument("--seed", type=int, default=None)
    solve.add_argument("--limit-exact", type=int, default=None)
    solve.add_argument("--out", default=None)
    solve.set_defaults(func=cmd_solve)

    vb = sub.add_parser("verify-bounds", help="run the bound verification harness")
    vb.add_argument("--trials", type=int, default=200)
    vb.add_argument("-n", type=int, default=None, help="fix a single instance size")
    vb.add_argument("--n-min", type=int, default=2)
    vb.add_argument("--n-max", type=int, default=12)
    vb.add_argument("--seed", type=int, default=0)
    vb.add_argument("--coeff-bound", type=int, default=100)
    vb.add_argument("--limit-exact", type=int, default=48)
    vb.add_argument("--guard-trials", type=int, default=500)
    vb.add_argument("--chain-samples", type=int, default=20000)
    vb.add_argument("--only", default=None, help="comma-separated family filter")
    vb.add_argument("--workers", type=int, default=1)
    vb.add_argument("--no-figures", action="store_true")
    vb.add_argument("--out", default=None)
    vb.set_defaults(func=cmd_verify_bounds)

    rend = sub.add_parser("render", help="render an instance (and certificate) as SVG")
    rend.add_argument("--in", dest="input", required=True)
    rend.add_argument("--certificate", default=None)
    rend.add_argument("--domain", choices=["lines", "vertices", "cells"], default=None)
    rend.add_argument("--size", type=int, default=640)
    rend.add_argument("--out", default=None)
    rend.set_defaults(func=cmd_render)

    exp = sub.add_parser("export", help="build and export the full arrangement JSON")
    exp.add_argument("--in", dest="input", required=True)
    exp.add_argument("--out", default=None)
    exp.set_defaults(func=cmd_export)

    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    if args.format == "svg" and args.command != "render":
        print(f"{args.command}: svg output only applies to render", file=sys.stderr)
        return EXIT_INPUT
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
