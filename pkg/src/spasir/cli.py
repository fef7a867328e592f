"""Command-line interface.

Subcommands: ``generate`` (write a graph file), ``infect`` (one run with
optional per-vertex detail), ``experiment`` (full grid to CSV), ``bounds``
(tabulate the analytic thresholds and the long-edge probability bound),
``regress`` (log-log regression of longest jump vs network size, exported
as CSV for downstream plotting), and ``verify`` (invariant suite).

Exit codes: 0 success, 1 verification failure, 2 configuration error,
3 I/O error.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from .analysis import loglog_regression, long_edge_prob_bound, phi_bound, theta_bound
from .generator import SpaGraph, SpaParams, generate
from .geometry import MetricConfig
from .harness import (
    CSV_HEADER,
    ConfigError,
    ExperimentConfig,
    _record_for,
    parse_records,
    run_experiment,
    run_single_infection,
    write_detail_csv,
)
from .verify import run_checks

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_CONFIG = 2
EXIT_IO = 3


def _parse_p(tok: str) -> float:
    return math.inf if tok == "inf" else int(tok)


def _parse_origin(tok: str):
    return int(tok) if tok.lstrip("-").isdigit() else tok


def _build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="spasir", description=__doc__)
    sub = top.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", help="generate one graph and write the edge-list file")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--variant", choices=("original", "modified"), default="modified")
    gen.add_argument("--a1", type=float, default=0.5)
    gen.add_argument("--a2", type=float, default=1.0)
    gen.add_argument("--d", type=int, default=1)
    gen.add_argument("--p", type=_parse_p, default=math.inf, help="integer >= 1 or 'inf'")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True)

    inf = sub.add_parser("infect", help="run one infection on a saved graph")
    inf.add_argument("--graph", required=True)
    inf.add_argument("--scenario", choices=("A", "B"), required=True)
    inf.add_argument("--gamma", type=float, required=True)
    inf.add_argument("--origin", type=_parse_origin, default="oldest")
    inf.add_argument("--seed", type=int, default=0)
    inf.add_argument("--out", help="write the one-row experiments CSV here")
    inf.add_argument("--detail", help="write per-vertex infection detail CSV here")

    exp = sub.add_parser("experiment", help="run a parameter grid to an experiments CSV")
    exp.add_argument("--config", help="flat 'section.key = value' config file")
    exp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                     help="override one config key (repeatable)")
    exp.add_argument("--seed", type=int, help="override seeds.master")
    exp.add_argument("--out", help="output directory (default from config)")
    exp.add_argument("--workers", type=int, default=1)

    bnd = sub.add_parser("bounds", help="tabulate thresholds and the long-edge bound")
    bnd.add_argument("--a1", type=float, default=0.5)
    bnd.add_argument("--a2", type=float, default=1.0)
    bnd.add_argument("--gamma", type=float, default=10.0)
    bnd.add_argument("--d", type=int, default=1)
    bnd.add_argument("--p", type=_parse_p, default=math.inf)
    bnd.add_argument("--phi", type=float, default=None,
                     help="length exponent (default: midpoint of (0, phi_bound))")
    bnd.add_argument("--n", default=None,
                     help="comma list of sizes (default log grid 1e3..1e12)")
    bnd.add_argument("--out", required=True)

    reg = sub.add_parser("regress", help="log-log regression of longest jump vs n")
    reg.add_argument("--in", dest="infile", required=True)
    reg.add_argument("--scenario", choices=("A", "B"), default=None)
    reg.add_argument("--gamma", type=float, default=None)
    reg.add_argument("--out", required=True)

    ver = sub.add_parser("verify", help="run the invariant checks")
    ver.add_argument("--level", choices=("fast", "full"), default="fast")

    return top


def _cmd_generate(args) -> int:
    params = SpaParams(
        n=args.n, a1=args.a1, a2=args.a2,
        metric=MetricConfig(d=args.d, p=args.p), variant=args.variant, seed=args.seed,
    )
    graph = generate(params)
    graph.save(args.out)
    print(
        f"n={graph.n} edges={len(graph.edges)} mean_in_degree={graph.mean_in_degree():.4f} "
        f"-> {args.out}"
    )
    return EXIT_OK


def _cmd_infect(args) -> int:
    graph = SpaGraph.load(args.graph)
    outcome = run_single_infection(graph, args.scenario, args.gamma, args.origin, args.seed)
    print(
        f"origin={outcome.origin} attack_size={outcome.attack_size} "
        f"duration={outcome.duration} longest_jump={outcome.longest_jump!r} "
        f"max_displacement={outcome.max_displacement!r}"
    )
    if args.out:
        rec = _record_for(
            graph, graph.params, args.scenario, args.gamma, 0, args.seed,
            args.origin, outcome,
        )
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(CSV_HEADER + "\n" + rec.to_csv_row() + "\n", encoding="ascii")
    if args.detail:
        write_detail_csv(args.detail, graph, outcome)
    return EXIT_OK


def _cmd_experiment(args) -> int:
    overrides = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(item, "override must look like key=value")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    if args.seed is not None:
        overrides["seeds.master"] = str(args.seed)
    if args.out is not None:
        overrides["output.dir"] = args.out
    file_text = Path(args.config).read_text() if args.config else None
    config = ExperimentConfig.from_sources(file_text, overrides)
    out_path = Path(config.out_dir) / "experiments.csv"
    rows = run_experiment(config, out_path, workers=args.workers)
    print(f"{rows} rows -> {out_path}")
    return EXIT_OK


def _cmd_bounds(args) -> int:
    metric = MetricConfig(d=args.d, p=args.p)
    pb = phi_bound(args.a1, args.d)
    phi = args.phi if args.phi is not None else pb / 2.0
    if args.n:
        grid = [float(x) for x in args.n.split(",")]
    else:
        grid = list(np.logspace(3, 12, 10))
    lines = ["n,phi,lambda,m,m1,phi_bound,theta_bound,bound,warning"]
    from .analysis import critical_time_m, critical_time_m_i

    warn = phi >= pb
    for n in grid:
        lam = n ** (-phi)
        lines.append(
            ",".join(
                [
                    repr(float(n)), repr(float(phi)), repr(float(lam)),
                    repr(critical_time_m(lam, args.a2, metric)),
                    repr(critical_time_m_i(1, lam, args.a1, args.a2, metric)),
                    repr(pb), repr(theta_bound(args.a1)),
                    repr(long_edge_prob_bound(n, args.a1, args.a2, args.gamma, metric, phi)),
                    "1" if warn else "0",
                ]
            )
        )
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="ascii")
    if warn:
        print(f"warning: phi={phi} >= phi_bound={pb}; bound not guaranteed to vanish")
    print(f"{len(grid)} rows -> {args.out}")
    return EXIT_OK


def _cmd_regress(args) -> int:
    records = parse_records(args.infile)
    if args.scenario is not None:
        records = [r for r in records if r.scenario == args.scenario]
    if args.gamma is not None:
        records = [r for r in records if r.gamma == args.gamma]
    points = [(r.n, r.longest_jump) for r in records]
    result = loglog_regression(points)
    lines = [
        "slope,intercept,r2,n_used,n_excluded",
        ",".join(
            [repr(result.slope), repr(result.intercept), repr(result.r2),
             str(result.n_used), str(result.n_excluded)]
        ),
    ]
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    Path(args.out).write_text("\n".join(lines) + "\n", encoding="ascii")
    print(
        f"slope={result.slope:.4f} intercept={result.intercept:.4f} r2={result.r2:.4f} "
        f"({result.n_used} points, {result.n_excluded} zero-jump rows excluded) -> {args.out}"
    )
    return EXIT_OK


def _cmd_verify(args) -> int:
    return EXIT_OK if run_checks(args.level) else EXIT_VERIFY


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "infect": _cmd_infect,
        "experiment": _cmd_experiment,
        "bounds": _cmd_bounds,
        "regress": _cmd_regress,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
