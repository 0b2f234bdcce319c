"""Command line front end.

Subcommands:

  generate   draw random Gabriel-graph networks and write them to files
  run        simulate dynamic traffic on one network
  sweep      grid of simulations over omega/gamma/mu with replication
  verify     cross-check the three search algorithms on random instances
  stats      aggregate run summaries into population statistics

Any subcommand accepts ``--config FILE`` holding ``key = value`` lines
(# comments allowed); command line flags override the file.
"""

from __future__ import annotations

import argparse
import csv
import os
import random
import sys

from . import baselines  # noqa: F401  (re-exported for scripting)
from . import modulation, netgraph, simcore
from .netgraph import Multigraph
from .routing import Policy
from .simcore import TrafficConfig


def _read_config(path) -> list[str]:
    """Turn a flat config file into an argv fragment."""
    tokens = []
    with open(path) as f:
        for ln, raw in enumerate(f, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise SystemExit(f"{path}:{ln}: expected key = value")
            key, value = (part.strip() for part in line.split("=", 1))
            if not key or not value:
                raise SystemExit(f"{path}:{ln}: expected key = value")
            tokens.append(f"--{key.replace('_', '-')}")
            tokens.append(value)
    return tokens


def _expand_config(argv: list[str]) -> list[str]:
    """Splice --config file tokens in right after the subcommand, so
    explicit flags given later win during parsing."""
    out = list(argv)
    path = None
    for i, tok in enumerate(out):
        if tok == "--config" and i + 1 < len(out):
            path = out[i + 1]
            del out[i:i + 2]
            break
        if tok.startswith("--config="):
            path = tok.split("=", 1)[1]
            del out[i]
            break
    if path is None:
        return out
    if not out:
        raise SystemExit("--config requires a subcommand")
    return [out[0]] + _read_config(path) + out[1:]


def _positive(kind):
    def parse(text):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"{text} is not positive")
        return value
    return parse


def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="eonsim",
        description="Spectrum-aware shortest path routing testbed")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="key = value defaults file")
        sp.add_argument("--seed", default="0", help="master random seed")

    g = sub.add_parser("generate", help="write random network files")
    common(g)
    g.add_argument("--vertices", type=_positive(int), default=75)
    g.add_argument("--density", type=_positive(float), default=1e-4,
                   help="vertices per square km")
    g.add_argument("--count", type=_positive(int), default=1)
    g.add_argument("--omega", type=_positive(int), default=160,
                   help="spectrum units per edge")
    g.add_argument("--out-dir", default=".")

    r = sub.add_parser("run", help="simulate traffic on a network file")
    common(r)
    r.add_argument("--graph", required=True)
    r.add_argument("--omega", type=_positive(int), default=None,
                   help="override the file's spectrum width")
    r.add_argument("--gamma", type=_positive(float), default=10.0,
                   help="mean demand size, units")
    r.add_argument("--mu", type=_positive(float), default=0.3,
                   help="target utilization")
    r.add_argument("--delta", type=_positive(float), default=10.0,
                   help="mean holding time, days")
    r.add_argument("--days", type=_positive(float), default=20.0)
    r.add_argument("--policy", choices=[p.value for p in Policy],
                   default=Policy.FIRST_FIT.value)
    r.add_argument("--algos", default="multilabel",
                   help="comma list from: " + ",".join(simcore.ALGORITHMS))
    r.add_argument("--levels", type=_positive(int), default=4,
                   help="modulation levels")
    r.add_argument("--reach-factor", type=_positive(float), default=1.5,
                   help="top reach as a multiple of the network diameter")
    r.add_argument("--no-modulation", action="store_true")
    r.add_argument("--validate", action="store_true",
                   help="recheck spectrum conservation after every event")
    r.add_argument("--out", default=None, help="per-search CSV path")
    r.add_argument("--summary", default=None, help="run summary CSV path")

    w = sub.add_parser("sweep", help="replicated parameter grid")
    common(w)
    w.add_argument("--vertices", type=_positive(int), default=75)
    w.add_argument("--density", type=_positive(float), default=1e-4)
    w.add_argument("--samples", type=_positive(int), default=10,
                   help="independent networks per grid point")
    w.add_argument("--omega", default="160", help="comma list")
    w.add_argument("--gamma", default="10", help="comma list")
    w.add_argument("--mu", default="0.3", help="comma list")
    w.add_argument("--delta", type=_positive(float), default=10.0)
    w.add_argument("--days", type=_positive(float), default=20.0)
    w.add_argument("--policy", choices=[p.value for p in Policy],
                   default=Policy.FIRST_FIT.value)
    w.add_argument("--algos", default="multilabel,filtered,brute")
    w.add_argument("--levels", type=_positive(int), default=4)
    w.add_argument("--reach-factor", type=_positive(float), default=1.5)
    w.add_argument("--no-modulation", action="store_true")
    w.add_argument("--out-dir", default=".")

    v = sub.add_parser("verify", help="randomized cross-algorithm check")
    common(v)
    v.add_argument("--instances", type=_positive(int), default=1000)
    v.add_argument("--max-vertices", type=_positive(int), default=10)
    v.add_argument("--max-omega", type=_positive(int), default=16)

    s = sub.add_parser("stats", help="aggregate run summaries")
    common(s)
    s.add_argument("--runs", nargs="+", required=True,
                   help="run summary CSV files")
    s.add_argument("--out", default=None, help="population CSV path")
    return p


def _cmd_generate(args) -> int:
    os.makedirs(args.out_dir, exist_ok=True)
    rows = []
    for i in range(args.count):
        g, _pts = netgraph.gabriel_generate(
            args.vertices, args.density, seed=f"{args.seed}/{i}",
            omega=args.omega)
        path = os.path.join(args.out_dir, f"graph_{i:03d}.txt")
        netgraph.save_graph(g, path)
        stats = netgraph.compute_stats(g)
        rows.append((i, stats))
        print(f"{path}: {g.n_vertices} vertices, {g.edge_count} edges, "
              f"mean degree {stats.vertex_degree.mean:.2f}")
    with open(os.path.join(args.out_dir, "stats.csv"), "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(("graph", "quantity", "min", "mean", "max", "variance"))
        for i, stats in rows:
            for row in netgraph.stats_rows(stats):
                w.writerow((i,) + row)
    return 0


def _load_run_graph(args) -> Multigraph:
    g = netgraph.load_graph(args.graph)
    if args.omega is not None and args.omega != g.omega:
        h = Multigraph(g.n_vertices, args.omega)
        for u, v, length in g.edges:
            h.add_edge(u, v, length)
        g = h
    return g


def _cmd_run(args) -> int:
    g = _load_run_graph(args)
    model = None
    if not args.no_modulation:
        model = modulation.calibrate_reach(g, args.reach_factor, args.levels)
    traffic = TrafficConfig(args.mu, args.gamma, args.delta, args.days)
    algos = tuple(a.strip() for a in args.algos.split(",") if a.strip())
    report, records = simcore.run_simulation(
        g, traffic, model, Policy(args.policy), algos, args.seed,
        validate=args.validate)
    if args.out:
        simcore.write_search_csv(records, args.out)
        summary = args.summary or os.path.splitext(args.out)[0] + ".summary.csv"
        simcore.write_run_summary(report, summary)
    print(f"offered {report.offered}, established {report.established}, "
          f"blocked {report.blocked}, utilization {report.utilization:.4f}")
    for algo in sorted(report.algo_stats):
        a = report.algo_stats[algo]
        print(f"  {algo}: {a.searches} searches, "
              f"mean {a.time_mean_us:.1f} us (max {a.time_max_us:.1f}), "
              f"mean {a.words_mean:.0f} words (max {a.words_max})")
    return 0


def _cmd_sweep(args) -> int:
    os.makedirs(args.out_dir, exist_ok=True)
    omegas = [int(x) for x in args.omega.split(",")]
    gammas = [float(x) for x in args.gamma.split(",")]
    mus = [float(x) for x in args.mu.split(",")]
    algos = tuple(a.strip() for a in args.algos.split(",") if a.strip())
    topologies = {}

    def topology(i):
        # one network per sample index, reused across the whole grid
        if i not in topologies:
            topologies[i], _ = netgraph.gabriel_generate(
                args.vertices, args.density, seed=f"{args.seed}/graph/{i}")
        return topologies[i]

    pop_rows = []
    for omega in omegas:
        for gamma in gammas:
            for mu in mus:
                reports = []
                for i in range(args.samples):
                    base = topology(i)
                    g = Multigraph(base.n_vertices, omega)
                    for u, v, length in base.edges:
                        g.add_edge(u, v, length)
                    model = None
                    if not args.no_modulation:
                        model = modulation.calibrate_reach(
                            g, args.reach_factor, args.levels)
                    traffic = TrafficConfig(mu, gamma, args.delta, args.days)
                    report, _ = simcore.run_simulation(
                        g, traffic, model, Policy(args.policy), algos,
                        f"{args.seed}/{omega}/{gamma}/{mu}/{i}")
                    reports.append(report)
                    tag = f"o{omega}_g{gamma:g}_m{mu:g}_s{i:02d}"
                    simcore.write_run_summary(
                        report, os.path.join(args.out_dir,
                                             f"run_{tag}.summary.csv"))
                pop = simcore.aggregate(reports)
                for row in pop.rows:
                    pop_rows.append((omega, gamma, mu) + (
                        row.metric, row.algo, row.sample_mean,
                        row.sample_max, row.rse, row.ci95, pop.samples))
                print(f"omega={omega} gamma={gamma:g} mu={mu:g}: "
                      f"{args.samples} runs done")
    path = os.path.join(args.out_dir, "population.csv")
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(("omega", "gamma", "mu", "metric", "algo", "sample_mean",
                    "sample_max", "rse", "ci95", "samples"))
        for row in pop_rows:
            w.writerow(row)
    print(f"wrote {path}")
    return 0


def _cmd_verify(args) -> int:
    rng = random.Random(f"{args.seed}/verify")
    failures = 0
    for i in range(args.instances):
        g, s, t, n_base, model, policy = simcore.random_instance(
            rng, args.max_vertices, args.max_omega)
        err = simcore.check_instance(g, s, t, n_base, model, policy,
                                     seed=f"{args.seed}/{i}")
        if err:
            failures += 1
            print(f"instance {i}: {err}", file=sys.stderr)
    print(f"{args.instances} instances, {failures} failures")
    return 1 if failures else 0


def _cmd_stats(args) -> int:
    reports = [simcore.read_run_summary(path) for path in args.runs]
    pop = simcore.aggregate(reports)
    for row in pop.rows:
        print(f"{row.metric:12s} {row.algo:12s} mean {row.sample_mean:12.3f} "
              f"max {row.sample_max:12.3f} rse {row.rse:.4f} "
              f"ci95 {row.ci95:.4f}")
    if pop.low_sample:
        print(f"note: only {pop.samples} runs; intervals are rough")
    if args.out:
        simcore.write_population_csv(pop, args.out)
    return 0


_COMMANDS = {
    "generate": _cmd_generate,
    "run": _cmd_run,
    "sweep": _cmd_sweep,
    "verify": _cmd_verify,
    "stats": _cmd_stats,
}


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    args = _build_parser().parse_args(_expand_config(list(argv)))
    return _COMMANDS[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
