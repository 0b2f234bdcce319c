"""Dynamic traffic simulation and cross-algorithm verification.

Demands arrive in a Poisson stream, hold an exponential time and leave.
Each arrival is routed by every enabled algorithm on the identical
spectrum state; the results must agree on feasibility, cost and unit
width or the run aborts.  The label-setting search's result actually
establishes the connection.  Per-search wall time and peak memory
words are recorded, runs are summarized, and populations of runs are
aggregated with confidence intervals.
"""

from __future__ import annotations

import csv
import logging
import math
import random
import time
from dataclasses import dataclass
from heapq import heappop, heappush

from . import baselines, modulation, netgraph, routing, spectrum
from .instrument import WordMeter
from .netgraph import Multigraph
from .routing import Policy

log = logging.getLogger(__name__)

ALGORITHMS = ("multilabel", "filtered", "brute")


class ConfigError(ValueError):
    pass


class CrossCheckError(RuntimeError):
    """Enabled algorithms disagreed on one search instance."""


@dataclass(frozen=True)
class TrafficConfig:
    """Offered traffic: target utilization ``mu``, mean demand size
    ``gamma`` (units), mean holding time ``delta`` and horizon (days)."""

    mu: float
    gamma: float
    delta: float
    horizon: float

    def __post_init__(self):
        for name in ("mu", "gamma", "delta", "horizon"):
            if not getattr(self, name) > 0:
                raise ConfigError(f"{name} must be positive")
        if self.gamma < 1:
            raise ConfigError("mean demand size below one unit")


@dataclass(frozen=True)
class DemandSpec:
    source: int
    target: int
    n_base: int

    def __post_init__(self):
        if self.source == self.target:
            raise ConfigError("demand endpoints must differ")
        if self.n_base < 1:
            raise ConfigError("demand needs at least one unit")


@dataclass(frozen=True)
class Connection:
    demand: DemandSpec
    path: tuple[int, ...]
    cu: tuple[int, int]
    departs: float


@dataclass(frozen=True)
class SearchRecord:
    day: float
    src: int
    dst: int
    n_base: int
    algo: str
    success: bool
    cost: int | None
    cu_lo: int | None
    cu_width: int | None
    time_us: float
    words_cost: int
    words_edge: int
    words_unit: int


@dataclass(frozen=True)
class AlgoAggregate:
    searches: int
    time_mean_us: float
    time_max_us: float
    words_mean: float
    words_max: int


@dataclass(frozen=True)
class RunReport:
    utilization: float
    offered: int
    established: int
    blocked: int
    algo_stats: dict


@dataclass(frozen=True)
class PopulationRow:
    metric: str
    algo: str
    sample_mean: float
    sample_max: float
    rse: float
    ci95: float


@dataclass(frozen=True)
class PopulationReport:
    rows: list
    samples: int
    low_sample: bool


# -- traffic -------------------------------------------------------------

def arrival_rate(mu: float, edge_count: int, omega: int, delta: float,
                 mean_hops: float, gamma: float) -> float:
    """Arrival intensity (demands per day) steering the network toward
    utilization ``mu``: each active demand occupies about
    ``gamma * mean_hops`` units of the ``edge_count * omega`` total."""
    if min(mu, edge_count, omega, delta, mean_hops, gamma) <= 0:
        raise ConfigError("all traffic parameters must be positive")
    return mu * edge_count * omega / (delta * mean_hops * gamma)


def mean_shortest_hops(g: Multigraph) -> float:
    """Mean hop count of length-shortest paths over all ordered pairs."""
    if g.n_vertices < 2:
        raise ValueError("need at least two vertices")
    total = 0
    pairs = 0
    for _s, _t, _length, hops in netgraph.all_pairs_paths(g):
        total += hops
        pairs += 1
    if pairs != g.n_vertices * (g.n_vertices - 1):
        raise ValueError("graph is not connected")
    return total / pairs


def _poisson(rng, lam: float) -> int:
    # product method; lam stays small here (mean demand size minus one)
    if lam <= 0:
        return 0
    limit = math.exp(-lam)
    k = 0
    p = rng.random()
    while p > limit:
        k += 1
        p *= rng.random()
    return k


def draw_units(rng, gamma: float) -> int:
    """Demand size: one unit plus Poisson(gamma - 1), so mean gamma."""
    return 1 + _poisson(rng, gamma - 1.0)


def draw_endpoints(rng, n_vertices: int) -> tuple[int, int]:
    """Uniform ordered pair of distinct vertices."""
    a = rng.randrange(n_vertices)
    b = rng.randrange(n_vertices - 1)
    if b >= a:
        b += 1
    return a, b


def draw_holding(rng, delta: float) -> float:
    return rng.expovariate(1.0 / delta)


def draw_demand(rng, gamma: float, n_vertices: int, delta: float):
    """One demand plus its holding time, all drawn from ``rng``."""
    s, t = draw_endpoints(rng, n_vertices)
    n_base = draw_units(rng, gamma)
    return DemandSpec(s, t, n_base), draw_holding(rng, delta)


# -- the event loop ------------------------------------------------------

_DEPART, _ARRIVE = 0, 1


def run_simulation(graph: Multigraph, traffic: TrafficConfig, model,
                   policy=Policy.FIRST_FIT, algorithms=("multilabel",),
                   seed=0, validate: bool = False,
                   count_archive: bool = False):
    """Simulate one run; returns ``(RunReport, [SearchRecord])``.

    The graph starts from (and is left in) a mutated spectrum state:
    availability is reset to full here, then connections allocate and
    release as they come and go.  All randomness derives from ``seed``
    through fixed named substreams, so reruns are identical apart from
    wall-clock timings.  ``validate`` rechecks per-edge spectrum
    conservation after every event.
    """
    unknown = [a for a in algorithms if a not in ALGORITHMS]
    if unknown:
        raise ConfigError(f"unknown algorithms: {unknown}")
    if "multilabel" not in algorithms:
        raise ConfigError("the multilabel search establishes connections "
                          "and cannot be disabled")
    algos = [a for a in ALGORITHMS if a in algorithms]
    rng_arrive = random.Random(f"{seed}/arrivals")
    rng_sizes = random.Random(f"{seed}/sizes")
    rng_ends = random.Random(f"{seed}/endpoints")
    rng_hold = random.Random(f"{seed}/holding")
    rng_fit = random.Random(f"{seed}/random-fit")

    graph.reset_spectrum()
    alpha = mean_shortest_hops(graph)
    lam = arrival_rate(traffic.mu, graph.edge_count, graph.omega,
                       traffic.delta, alpha, traffic.gamma)
    horizon = traffic.horizon
    events = []
    seq = 0
    first = rng_arrive.expovariate(lam)
    if first <= horizon:
        heappush(events, (first, seq, _ARRIVE, None))
        seq += 1
    live: dict[int, Connection] = {}
    last = 0.0
    used_units = 0
    util_integral = 0.0
    offered = established = blocked = 0
    records: list[SearchRecord] = []
    while events:
        now, _sq, kind, payload = heappop(events)
        if now > horizon:
            break
        util_integral += used_units * (now - last)
        last = now
        if kind == _ARRIVE:
            offered += 1
            src, dst = draw_endpoints(rng_ends, graph.n_vertices)
            n_base = draw_units(rng_sizes, traffic.gamma)
            hold = draw_holding(rng_hold, traffic.delta)
            decide = modulation.make_decide(n_base, model, graph.omega)
            required = modulation.make_required(n_base, model)
            results = {}
            for algo in algos:
                meter = WordMeter()
                began = time.perf_counter_ns()
                if algo == "multilabel":
                    res = routing.search(graph, src, dst, decide, required,
                                         policy, rng_fit, meter, count_archive)
                elif algo == "filtered":
                    res = baselines.filtered_search(graph, src, dst, n_base,
                                                    model, policy, rng_fit,
                                                    meter)
                else:
                    res = baselines.brute_search(graph, src, dst, decide,
                                                 required, policy, rng_fit,
                                                 meter)
                elapsed_us = (time.perf_counter_ns() - began) / 1000.0
                results[algo] = res
                records.append(SearchRecord(
                    now, src, dst, n_base, algo, res is not None,
                    res.cost if res else None,
                    res.cu[0] if res else None,
                    res.cu[1] - res.cu[0] + 1 if res else None,
                    elapsed_us, meter.cost_words, meter.edge_words,
                    meter.unit_words))
            _cross_check(results, now, src, dst, n_base)
            res = results["multilabel"]
            if res is not None:
                for eid in res.path:
                    graph.allocate_cu(eid, res.cu)
                used_units += (res.cu[1] - res.cu[0] + 1) * len(res.path)
                conn = Connection(DemandSpec(src, dst, n_base), res.path,
                                  res.cu, now + hold)
                live[seq] = conn
                heappush(events, (conn.departs, seq, _DEPART, seq))
                seq += 1
                established += 1
            else:
                blocked += 1
            nxt = now + rng_arrive.expovariate(lam)
            if nxt <= horizon:
                heappush(events, (nxt, seq, _ARRIVE, None))
                seq += 1
        else:
            conn = live.pop(payload)
            for eid in conn.path:
                graph.release_cu(eid, conn.cu)
            used_units -= (conn.cu[1] - conn.cu[0] + 1) * len(conn.path)
        if validate:
            _check_conservation(graph, live.values())
    util_integral += used_units * (horizon - last)
    capacity = graph.edge_count * graph.omega
    algo_stats = {}
    for algo in algos:
        times = [r.time_us for r in records if r.algo == algo]
        words = [r.words_cost + r.words_edge + r.words_unit
                 for r in records if r.algo == algo]
        n = len(times)
        algo_stats[algo] = AlgoAggregate(
            n,
            sum(times) / n if n else 0.0,
            max(times) if n else 0.0,
            sum(words) / n if n else 0.0,
            max(words) if n else 0)
    report = RunReport(util_integral / (horizon * capacity), offered,
                       established, blocked, algo_stats)
    assert report.established + report.blocked == report.offered
    return report, records


def _cross_check(results, day, src, dst, n_base):
    sigs = {}
    for algo, res in results.items():
        if res is None:
            sigs[algo] = (False, None, None)
        else:
            sigs[algo] = (True, res.cost, res.cu[1] - res.cu[0] + 1)
    if len(set(sigs.values())) > 1:
        raise CrossCheckError(
            f"day {day:.4f}: demand {src}->{dst} x{n_base}: "
            f"algorithms disagree: {sigs}")


def _check_conservation(graph, connections):
    """Every edge's available plus allocated units must tile the
    universe exactly, with no overlap between allocations."""
    per_edge: dict[int, list] = {}
    for conn in connections:
        for eid in conn.path:
            per_edge.setdefault(eid, []).append(conn.cu)
    for eid in range(graph.edge_count):
        avail = graph.au[eid]
        spectrum.validate(avail)
        cus = sorted(per_edge.get(eid, ()))
        prev_hi = None
        held = 0
        for lo, hi in cus:
            if prev_hi is not None and lo <= prev_hi:
                raise AssertionError(f"edge {eid}: overlapping allocations")
            if spectrum.intersect_cu((lo, hi), avail):
                raise AssertionError(
                    f"edge {eid}: units {(lo, hi)} both allocated and free")
            prev_hi = hi
            held += hi - lo + 1
        if held + spectrum.unit_count(avail) != graph.omega:
            raise AssertionError(f"edge {eid}: spectrum not conserved")


# -- populations ---------------------------------------------------------

def aggregate(reports) -> PopulationReport:
    """Combine per-run summaries into population statistics.

    For each metric: the sample mean of run means, the sample maximum
    of run maxima, the relative standard error of the mean and the 95%
    confidence half-width (normal approximation).
    """
    n = len(reports)
    if n < 2:
        raise ValueError("need at least two runs to aggregate")
    algos = sorted(reports[0].algo_stats)
    for r in reports:
        if sorted(r.algo_stats) != algos:
            raise ValueError("runs enabled different algorithm sets")
    rows = []

    def emit(metric, algo, means, maxima):
        m = sum(means) / n
        sd = math.sqrt(sum((x - m) ** 2 for x in means) / (n - 1))
        se = sd / math.sqrt(n)
        rows.append(PopulationRow(metric, algo, m, max(maxima),
                                  se / abs(m) if m else 0.0, 1.96 * se))

    emit("utilization", "net", [r.utilization for r in reports],
         [r.utilization for r in reports])
    for algo in algos:
        emit("time_us", algo,
             [r.algo_stats[algo].time_mean_us for r in reports],
             [r.algo_stats[algo].time_max_us for r in reports])
        emit("words", algo,
             [r.algo_stats[algo].words_mean for r in reports],
             [r.algo_stats[algo].words_max for r in reports])
    low = n < 30
    if low:
        log.warning("population of only %d runs; intervals are rough", n)
    return PopulationReport(rows, n, low)


# -- CSV interfaces ------------------------------------------------------

RUN_COLUMNS = ("day", "src", "dst", "n_base", "algo", "success", "cost",
               "cu_lo", "cu_width", "time_us", "words_cost", "words_edge",
               "words_unit")

SUMMARY_COLUMNS = ("algo", "searches", "time_mean_us", "time_max_us",
                   "words_mean", "words_max", "utilization", "offered",
                   "established", "blocked")

POPULATION_COLUMNS = ("metric", "algo", "sample_mean", "sample_max", "rse",
                      "ci95", "samples", "low_sample")


def write_search_csv(records, path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(RUN_COLUMNS)
        for r in records:
            w.writerow((f"{r.day:.6f}", r.src, r.dst, r.n_base, r.algo,
                        int(r.success),
                        "" if r.cost is None else r.cost,
                        "" if r.cu_lo is None else r.cu_lo,
                        "" if r.cu_width is None else r.cu_width,
                        f"{r.time_us:.3f}", r.words_cost, r.words_edge,
                        r.words_unit))


def write_run_summary(report: RunReport, path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(SUMMARY_COLUMNS)
        for algo in sorted(report.algo_stats):
            a = report.algo_stats[algo]
            w.writerow((algo, a.searches, f"{a.time_mean_us:.3f}",
                        f"{a.time_max_us:.3f}", f"{a.words_mean:.3f}",
                        a.words_max, f"{report.utilization:.9f}",
                        report.offered, report.established, report.blocked))


def read_run_summary(path) -> RunReport:
    with open(path, newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or tuple(reader.fieldnames) != SUMMARY_COLUMNS:
            raise ConfigError(f"{path}: not a run summary file")
        stats = {}
        util = offered = established = blocked = None
        for row in reader:
            stats[row["algo"]] = AlgoAggregate(
                int(row["searches"]), float(row["time_mean_us"]),
                float(row["time_max_us"]), float(row["words_mean"]),
                int(row["words_max"]))
            util = float(row["utilization"])
            offered = int(row["offered"])
            established = int(row["established"])
            blocked = int(row["blocked"])
    if util is None:
        raise ConfigError(f"{path}: empty run summary")
    return RunReport(util, offered, established, blocked, stats)


def write_population_csv(pop: PopulationReport, path) -> None:
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(POPULATION_COLUMNS)
        for r in pop.rows:
            w.writerow((r.metric, r.algo, f"{r.sample_mean:.6f}",
                        f"{r.sample_max:.6f}", f"{r.rse:.6f}",
                        f"{r.ci95:.6f}", pop.samples, int(pop.low_sample)))


# -- randomized cross-verification ---------------------------------------

def random_instance(rng, max_vertices: int = 10, max_omega: int = 16):
    """A small random search instance for cross-algorithm checking."""
    n = rng.randint(2, max_vertices)
    omega = rng.randint(4, max_omega)
    if rng.random() < 0.5:
        g, _ = netgraph.gabriel_generate(n, density=1e-4,
                                         seed=rng.randrange(2 ** 30),
                                         omega=omega)
    else:
        g = Multigraph(n, omega)
        order = list(range(n))
        rng.shuffle(order)
        for i in range(1, n):
            g.add_edge(order[rng.randrange(i)], order[i], rng.randint(1, 20))
        for _ in range(rng.randint(0, n)):
            u, v = draw_endpoints(rng, n)
            g.add_edge(u, v, rng.randint(1, 20))
    fill = rng.uniform(0.3, 0.9)
    for e in range(g.edge_count):
        g.set_available(e, spectrum.from_units(
            u for u in range(omega) if rng.random() < fill))
    n_base = rng.randint(1, 4)
    model = None
    if rng.random() < 0.5:
        model = modulation.calibrate_reach(g, rng.uniform(1.2, 2.0),
                                           rng.randint(1, 4))
    s = rng.randrange(n)
    t = rng.randrange(n)
    policy = rng.choice(list(Policy))
    return g, s, t, n_base, model, policy


def check_instance(g, s, t, n_base, model, policy, seed=0):
    """Run all three searches on one instance; returns a mismatch
    description, or None when they agree and every result is valid."""
    decide = modulation.make_decide(n_base, model, g.omega)
    required = modulation.make_required(n_base, model)
    outs = {
        "multilabel": routing.search(
            g, s, t, decide, required, policy, random.Random(f"{seed}/m")),
        "filtered": baselines.filtered_search(
            g, s, t, n_base, model, policy, random.Random(f"{seed}/f")),
        "brute": baselines.brute_search(
            g, s, t, decide, required, policy, random.Random(f"{seed}/b")),
    }
    sigs = {a: (r is not None, r.cost if r else None,
                r.cu[1] - r.cu[0] + 1 if r else None)
            for a, r in outs.items()}
    if len(set(sigs.values())) > 1:
        return f"disagreement: {sigs}"
    for algo, res in outs.items():
        if res is None:
            continue
        err = _validate_route(g, s, t, res, required)
        if err:
            return f"{algo}: {err}"
    return None


def _validate_route(g, s, t, res, required):
    lo, hi = res.cu
    need = required(res.cost)
    if hi - lo + 1 != need:
        return f"width {hi - lo + 1} differs from required {need}"
    v = s
    seen = {s}
    total = 0
    for eid in res.path:
        eu, ev, ln = g.edges[eid]
        if eu == v:
            v = ev
        elif ev == v:
            v = eu
        else:
            return f"path breaks at edge {eid}"
        if v in seen:
            return f"path revisits vertex {v}"
        seen.add(v)
        total += ln
        if not spectrum.contains_cu(g.au[eid], res.cu):
            return f"chosen units missing on edge {eid}"
    if v != t:
        return f"path ends at {v}, not {t}"
    if total != res.cost:
        return f"cost {res.cost} differs from path length {total}"
    return None
