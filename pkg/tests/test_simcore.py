"""Traffic model, event loop bookkeeping, aggregation, CSV round trips."""

import csv
import math
import random
import statistics
from dataclasses import replace

import pytest

from eonsim import simcore
from eonsim.modulation import ModulationModel
from eonsim.netgraph import Multigraph, gabriel_generate
from eonsim.routing import Policy
from eonsim.simcore import (AlgoAggregate, ConfigError, CrossCheckError,
                            RunReport, TrafficConfig, aggregate, arrival_rate,
                            draw_endpoints, draw_holding, draw_units,
                            mean_shortest_hops, run_simulation)


def test_arrival_rate_frozen():
    assert arrival_rate(1.0, 100, 160, 10.0, 4.0, 4.0) == 100.0
    assert arrival_rate(0.5, 100, 160, 10.0, 4.0, 4.0) == 50.0
    with pytest.raises(ConfigError):
        arrival_rate(0.0, 100, 160, 10.0, 4.0, 4.0)


def test_mean_shortest_hops(two_hop_graph):
    assert mean_shortest_hops(two_hop_graph) == pytest.approx(4 / 3)
    g = Multigraph(2, 4)
    g.add_edge(0, 1, 7)
    assert mean_shortest_hops(g) == 1.0
    lonely = Multigraph(3, 4)
    lonely.add_edge(0, 1, 1)
    with pytest.raises(ValueError):
        mean_shortest_hops(lonely)


def test_traffic_config_validation():
    TrafficConfig(0.3, 10.0, 10.0, 20.0)
    with pytest.raises(ConfigError):
        TrafficConfig(-0.1, 10.0, 10.0, 20.0)
    with pytest.raises(ConfigError):
        TrafficConfig(0.3, 0.5, 10.0, 20.0)  # mean size below one unit
    with pytest.raises(ConfigError):
        TrafficConfig(0.3, 10.0, 10.0, 0.0)


def test_draw_units_mean_and_floor():
    rng = random.Random("units")
    draws = [draw_units(rng, 4.0) for _ in range(20000)]
    assert min(draws) >= 1
    assert statistics.mean(draws) == pytest.approx(4.0, abs=0.1)
    assert all(draw_units(rng, 1.0) == 1 for _ in range(100))


def test_draw_endpoints_uniform_over_ordered_pairs():
    rng = random.Random("ends")
    counts = {}
    for _ in range(30000):
        pair = draw_endpoints(rng, 5)
        assert pair[0] != pair[1]
        counts[pair] = counts.get(pair, 0) + 1
    assert len(counts) == 20
    expected = 30000 / 20
    for pair, got in counts.items():
        assert abs(got - expected) < 5 * math.sqrt(expected), pair


def test_draw_holding_mean():
    rng = random.Random("hold")
    draws = [draw_holding(rng, 10.0) for _ in range(20000)]
    assert statistics.mean(draws) == pytest.approx(10.0, rel=0.05)


def _line_graph(omega=64):
    g = Multigraph(2, omega)
    g.add_edge(0, 1, 1)
    return g


def test_utilization_approaches_target():
    g = _line_graph()
    traffic = TrafficConfig(mu=0.25, gamma=2.0, delta=5.0, horizon=400.0)
    report, records = run_simulation(g, traffic, None, seed="util")
    assert report.offered == report.established + report.blocked
    assert report.offered > 300
    assert report.blocked < report.offered * 0.05
    assert report.utilization == pytest.approx(0.25, abs=0.06)


def test_run_is_deterministic_apart_from_clock():
    g, _ = gabriel_generate(12, seed="det", omega=32)
    traffic = TrafficConfig(0.3, 3.0, 5.0, 10.0)
    model = ModulationModel(2, 500.0)
    outs = []
    for _ in range(2):
        report, records = run_simulation(
            g, traffic, model, Policy.FIRST_FIT,
            ("multilabel", "filtered", "brute"), seed="rerun")
        outs.append((report, records))
    ra, rb = outs[0][1], outs[1][1]
    assert len(ra) == len(rb)
    for a, b in zip(ra, rb):
        # wall-clock timing is the only field free to differ
        assert replace(a, time_us=0.0) == replace(b, time_us=0.0)
    assert outs[0][0].utilization == outs[1][0].utilization
    assert outs[0][0].offered == outs[1][0].offered


def test_records_consistent_across_algorithms():
    g, _ = gabriel_generate(10, seed="rec", omega=16)
    traffic = TrafficConfig(0.3, 2.0, 5.0, 15.0)
    report, records = run_simulation(
        g, traffic, None, Policy.FIRST_FIT,
        ("multilabel", "filtered", "brute"), seed="rec")
    assert report.offered > 0
    per_arrival = {}
    for r in records:
        per_arrival.setdefault(r.day, []).append(r)
    for day, group in per_arrival.items():
        assert [g_.algo for g_ in group] == ["multilabel", "filtered", "brute"]
        sigs = {(g_.success, g_.cost, g_.cu_width) for g_ in group}
        assert len(sigs) == 1, day
        for r in group:
            assert r.time_us >= 0
            if r.success:
                assert r.cost is not None and r.cu_lo is not None
            else:
                assert r.cost is None and r.cu_lo is None and r.cu_width is None
    stats = report.algo_stats
    assert set(stats) == {"multilabel", "filtered", "brute"}
    for agg in stats.values():
        assert agg.searches == report.offered


def test_validate_checks_conservation():
    g, _ = gabriel_generate(8, seed="va", omega=16)
    traffic = TrafficConfig(0.4, 2.0, 4.0, 20.0)
    report, _ = run_simulation(g, traffic, None, seed="va", validate=True)
    assert report.offered > 10


def test_run_requires_multilabel():
    g = _line_graph()
    traffic = TrafficConfig(0.3, 2.0, 5.0, 5.0)
    with pytest.raises(ConfigError):
        run_simulation(g, traffic, None, algorithms=("filtered",))
    with pytest.raises(ConfigError):
        run_simulation(g, traffic, None, algorithms=("multilabel", "nope"))


def test_cross_check_raises_on_fabricated_disagreement():
    from eonsim.routing import RouteResult
    ok = RouteResult((0,), (0, 1), 5)
    worse = RouteResult((0,), (0, 1), 6)
    simcore._cross_check({"multilabel": ok, "brute": ok}, 0.0, 0, 1, 2)
    with pytest.raises(CrossCheckError):
        simcore._cross_check({"multilabel": ok, "brute": None}, 0.0, 0, 1, 2)
    with pytest.raises(CrossCheckError):
        simcore._cross_check({"multilabel": ok, "brute": worse}, 0.0, 0, 1, 2)


def _fake_report(util, tmean, tmax, wmean, wmax):
    return RunReport(util, 10, 9, 1,
                     {"multilabel": AlgoAggregate(10, tmean, tmax, wmean, wmax)})


def test_aggregate_math():
    reports = [_fake_report(0.2, 10.0, 100.0, 50.0, 500),
               _fake_report(0.4, 30.0, 90.0, 70.0, 700)]
    pop = aggregate(reports)
    assert pop.samples == 2 and pop.low_sample
    rows = {(r.metric, r.algo): r for r in pop.rows}
    util = rows[("utilization", "net")]
    assert util.sample_mean == pytest.approx(0.3)
    assert util.sample_max == pytest.approx(0.4)
    # sd of {0.2, 0.4} is 0.1414.., se is 0.1, ci95 is 0.196
    assert util.ci95 == pytest.approx(1.96 * 0.1, rel=1e-6)
    assert util.rse == pytest.approx(0.1 / 0.3, rel=1e-6)
    t = rows[("time_us", "multilabel")]
    assert t.sample_mean == pytest.approx(20.0)
    assert t.sample_max == pytest.approx(100.0)
    w = rows[("words", "multilabel")]
    assert w.sample_mean == pytest.approx(60.0)
    assert w.sample_max == 700


def test_aggregate_rejects_bad_input():
    with pytest.raises(ValueError):
        aggregate([_fake_report(0.2, 1, 1, 1, 1)])
    other = RunReport(0.1, 5, 5, 0,
                      {"brute": AlgoAggregate(5, 1.0, 1.0, 1.0, 1)})
    with pytest.raises(ValueError):
        aggregate([_fake_report(0.2, 1, 1, 1, 1), other])


def test_csv_round_trips(tmp_path):
    g, _ = gabriel_generate(8, seed="csv", omega=16)
    traffic = TrafficConfig(0.3, 2.0, 5.0, 10.0)
    report, records = run_simulation(g, traffic, None,
                                     algorithms=("multilabel", "filtered"),
                                     seed="csv")
    search_path = tmp_path / "search.csv"
    simcore.write_search_csv(records, search_path)
    with open(search_path, newline="") as f:
        rows = list(csv.DictReader(f))
    assert len(rows) == len(records)
    assert tuple(rows[0]) == simcore.RUN_COLUMNS
    blocked = [r for r in rows if r["success"] == "0"]
    for row in blocked:
        assert row["cost"] == "" and row["cu_lo"] == ""

    summary_path = tmp_path / "run.summary.csv"
    simcore.write_run_summary(report, summary_path)
    back = simcore.read_run_summary(summary_path)
    assert back.offered == report.offered
    assert back.established == report.established
    assert back.utilization == pytest.approx(report.utilization, abs=1e-9)
    assert set(back.algo_stats) == set(report.algo_stats)
    for algo, agg in report.algo_stats.items():
        assert back.algo_stats[algo].searches == agg.searches
        assert back.algo_stats[algo].words_max == agg.words_max
        assert back.algo_stats[algo].time_mean_us == pytest.approx(
            agg.time_mean_us, abs=1e-3)

    pop = aggregate([report, report])
    pop_path = tmp_path / "population.csv"
    simcore.write_population_csv(pop, pop_path)
    with open(pop_path, newline="") as f:
        prows = list(csv.DictReader(f))
    assert tuple(prows[0]) == simcore.POPULATION_COLUMNS
    assert {r["metric"] for r in prows} == {"utilization", "time_us", "words"}
    assert all(r["samples"] == "2" for r in prows)


def test_read_run_summary_rejects_other_files(tmp_path):
    path = tmp_path / "x.csv"
    path.write_text("a,b\n1,2\n")
    with pytest.raises(ConfigError):
        simcore.read_run_summary(path)
    empty = tmp_path / "empty.csv"
    empty.write_text(",".join(simcore.SUMMARY_COLUMNS) + "\n")
    with pytest.raises(ConfigError):
        simcore.read_run_summary(empty)
