"""Command-line interface: solve, verify-reg, verify-point, oracle, bench, fixtures."""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from pathlib import Path

from .graph import (
    DimacsError,
    characteristic_vector,
    complete_graph,
    figure1_graph,
    hamming_graph,
    make_clique,
    read_graph,
)
from .objective import clique_objective
from .optimality import certify_characteristic_vector, disprove_local_max, first_order_check
from .optimizer import SolveOptions, multistart
from .oracle import ENUMERATION_LIMIT, BudgetExceeded, enumerate_maximal_cliques, max_clique_exact, motzkin_straus_value
from .regularizer import KINDS, ParameterError, RegularizerSpec, verify_conditions

log = logging.getLogger("regclique")

SCHEMA_VERSION = 1
EXIT_FAIL = 1
EXIT_IO = 2
EXIT_PARAM = 3
EXIT_BUDGET = 4
BENCH_COLUMNS = ["instance", "reg", "max", "mean", "std", "cpu_time", "omitted_count", "error"]
GRAPH_SUFFIXES = (".clq", ".json")


def _weight(text: str):
    if text is None or text.lower() == "auto":
        return None
    return float(text)


def _add_reg_args(p: argparse.ArgumentParser, default: str = "pnorm") -> None:
    p.add_argument("--reg", choices=KINDS, default=default)
    p.add_argument("--p", type=float, default=3.0)
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--alpha1", type=_weight, default=None, help="p-norm weight, or 'auto' (0.99 x bound)")
    p.add_argument("--beta", type=float, default=5.0)
    p.add_argument("--alpha2", type=_weight, default=None, help="exponential weight, or 'auto' (0.99 x bound)")


def _spec_from_args(args, kind: str | None = None) -> RegularizerSpec:
    kind = kind or args.reg
    if kind == "pnorm":
        return RegularizerSpec.pnorm(p=args.p, epsilon=args.epsilon, alpha1=args.alpha1)
    if kind == "exp":
        return RegularizerSpec.exp(beta=args.beta, alpha2=args.alpha2)
    return RegularizerSpec(kind)


def _add_solve_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--starts", type=int, default=100)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--max-iters", type=int, default=10_000)
    p.add_argument("--parallel", action="store_true")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--no-timing", action="store_true", help="omit timings so identical runs give identical output")


def _options(args) -> SolveOptions:
    try:
        return SolveOptions(
            max_iters=args.max_iters, starts=args.starts, seed=args.seed, parallel=args.parallel, workers=args.workers
        )
    except ValueError as exc:
        raise ParameterError(str(exc)) from None


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _dump(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def cmd_solve(args) -> int:
    spec = _spec_from_args(args)
    opts = _options(args)
    g = read_graph(args.graph)
    report = multistart(g, spec, opts, instance=g.name)
    timing = not args.no_timing
    if args.format == "csv":
        _emit(report.to_csv(include_timing=timing), args.out)
    else:
        _emit(_dump(report.to_json(include_timing=timing)), args.out)
    return 0


def cmd_verify_reg(args) -> int:
    spec = _spec_from_args(args)
    report = verify_conditions(spec, args.dim, args.samples, args.seed)
    payload = {"schema_version": SCHEMA_VERSION, "regularizer": spec.to_json(), "dim": args.dim, **report.to_json()}
    _emit(_dump(payload), None)
    return 0 if report.ok else EXIT_FAIL


def _parse_clique(text: str) -> list[int]:
    try:
        ids = [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise ParameterError(f"--clique expects comma-separated vertex ids, got {text!r}") from None
    if not ids:
        raise ParameterError("--clique is empty")
    return [i - 1 for i in ids]


def cmd_verify_point(args) -> int:
    spec = _spec_from_args(args)
    g = read_graph(args.graph)
    vertices = _parse_clique(args.clique)
    try:
        clique = make_clique(g, vertices)
    except (ValueError, IndexError) as exc:
        raise ParameterError(str(exc)) from None
    if spec.strictly_convex:
        report = certify_characteristic_vector(g, spec, clique)
        ok = report.certified
    else:
        x = characteristic_vector(g, clique)
        report = first_order_check(g, spec, x)
        if report.first_order_ok:
            witness = disprove_local_max(g, spec, x)
            if witness is not None:
                report.second_order_ok = False
                report.ascent_direction = witness
                report.note = "x(C) is not a local maximizer: positive curvature along a critical direction"
        ok = report.first_order_ok and report.second_order_ok is not False
    payload = {
        "schema_version": SCHEMA_VERSION,
        "instance": g.name,
        "regularizer": spec.to_json(),
        "clique": clique.one_based(),
        "maximal": clique.maximal,
        "objective": clique_objective(g, spec, clique),
        **report.to_json(),
    }
    _emit(_dump(payload), None)
    return 0 if ok else EXIT_FAIL


def cmd_oracle(args) -> int:
    g = read_graph(args.graph)
    if args.enumerate and g.n > ENUMERATION_LIMIT and not args.force:
        raise ParameterError(f"refusing to enumerate maximal cliques for n={g.n} > {ENUMERATION_LIMIT}; pass --force")
    payload = {"schema_version": SCHEMA_VERSION, "instance": g.name, "n": g.n, "edges": g.edge_count}
    code = 0
    try:
        clique, omega = max_clique_exact(g, time_budget=args.time_budget)
        payload.update(exact=True, omega=omega, clique=clique.one_based(), ms_value=motzkin_straus_value(omega))
    except BudgetExceeded as exc:
        best = exc.best
        payload.update(exact=False, omega_lower_bound=best.size, clique=best.one_based(),
                       ms_value_lower_bound=motzkin_straus_value(best.size))
        code = EXIT_BUDGET
    if args.enumerate:
        cliques = enumerate_maximal_cliques(g)
        payload["maximal_cliques"] = [c.one_based() for c in cliques]
        payload["maximal_clique_count"] = len(cliques)
    _emit(_dump(payload), None)
    return code


def _graph_files(directory: Path) -> list[Path]:
    return sorted(p for p in directory.iterdir() if p.is_file() and p.suffix in GRAPH_SUFFIXES)


def cmd_bench(args) -> int:
    directory = Path(args.dir)
    if not directory.is_dir():
        raise OSError(f"not a directory: {directory}")
    kinds = [k.strip() for k in args.regs.split(",") if k.strip()]
    specs = []
    for k in kinds:
        if k not in KINDS:
            raise ParameterError(f"unknown regularizer {k!r}")
        specs.append(_spec_from_args(args, k))
    opts = _options(args)
    timing = not args.no_timing

    rows = []
    for path in _graph_files(directory):
        try:
            g = read_graph(path)
        except (DimacsError, OSError, ValueError) as exc:
            rows.extend([[path.stem, s.kind, "", "", "", "", "", str(exc)] for s in specs])
            continue
        for spec in specs:
            log.info("bench %s %s", g.name, spec.kind)
            try:
                r = multistart(g, spec, opts, instance=g.name)
            except Exception as exc:  # recorded per row; the run continues
                rows.append([g.name, spec.kind, "", "", "", "", "", f"{type(exc).__name__}: {exc}"])
                continue
            name, mx, mean, std, cpu = r.csv_row(include_timing=timing)
            rows.append([name, spec.kind, mx, mean, std, cpu, str(r.omitted_count), ""])

    out = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(out, lineterminator="\n")
        w.writerow(BENCH_COLUMNS)
        w.writerows(rows)
    finally:
        if args.out:
            out.close()
    return 0


def cmd_fixtures(args) -> int:
    out = Path(args.outdir)
    out.mkdir(parents=True, exist_ok=True)
    graphs = {"k3": complete_graph(3), "fig1": figure1_graph(), "hamming8-4": hamming_graph(8, 4)}
    for name, g in graphs.items():
        (out / f"{name}.clq").write_text(g.to_dimacs())
        print(out / f"{name}.clq")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="regclique", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="multistart Frank-Wolfe on one graph")
    p.add_argument("graph")
    _add_reg_args(p)
    _add_solve_args(p)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify-reg", help="sample the convexity/curvature/symmetry conditions")
    _add_reg_args(p)
    p.add_argument("--dim", type=int, default=100)
    p.add_argument("--samples", type=int, default=10_000)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_verify_reg)

    p = sub.add_parser("verify-point", help="certify the characteristic vector of a clique")
    p.add_argument("graph")
    _add_reg_args(p)
    p.add_argument("--clique", required=True, help="comma-separated 1-based vertex ids")
    p.set_defaults(func=cmd_verify_point)

    p = sub.add_parser("oracle", help="exact maximum clique and Motzkin-Straus value")
    p.add_argument("graph")
    p.add_argument("--enumerate", action="store_true")
    p.add_argument("--force", action="store_true")
    p.add_argument("--time-budget", type=float, default=None)
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("bench", help="multistart over every graph file in a directory, CSV out")
    p.add_argument("dir")
    p.add_argument("--regs", default="bomze,pnorm,exp")
    _add_reg_args(p)
    _add_solve_args(p)
    p.add_argument("--out", default=None)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("fixtures", help="write small fixture graphs (k3, fig1, hamming8-4) as DIMACS")
    p.add_argument("outdir")
    p.set_defaults(func=cmd_fixtures)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except (DimacsError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
