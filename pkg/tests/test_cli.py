"""End-to-end subcommand runs, in process, on tiny inputs."""

import csv
import os

import pytest

from eonsim import cli, netgraph


def run_cli(*argv):
    return cli.main([str(a) for a in argv])


def test_generate_writes_graphs_and_stats(tmp_path):
    out = tmp_path / "nets"
    code = run_cli("generate", "--vertices", 12, "--count", 2,
                   "--seed", "gen", "--omega", 32, "--out-dir", out)
    assert code == 0
    for i in range(2):
        g = netgraph.load_graph(out / f"graph_{i:03d}.txt")
        assert g.n_vertices == 12
        assert g.omega == 32
    with open(out / "stats.csv", newline="") as f:
        rows = list(csv.DictReader(f))
    assert {r["quantity"] for r in rows} == {
        "edge_length", "vertex_degree", "path_hops", "path_length"}
    assert {r["graph"] for r in rows} == {"0", "1"}


def test_generate_deterministic(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run_cli("generate", "--vertices", 10, "--count", 1, "--seed", 7,
            "--out-dir", a)
    run_cli("generate", "--vertices", 10, "--count", 1, "--seed", 7,
            "--out-dir", b)
    assert (a / "graph_000.txt").read_text() == (b / "graph_000.txt").read_text()


@pytest.fixture
def small_graph_file(tmp_path):
    run_cli("generate", "--vertices", 10, "--count", 1, "--seed", "cli",
            "--omega", 16, "--out-dir", tmp_path)
    return tmp_path / "graph_000.txt"


def test_run_writes_outputs(tmp_path, small_graph_file, capsys):
    out = tmp_path / "search.csv"
    code = run_cli("run", "--graph", small_graph_file, "--days", 5,
                   "--gamma", 2, "--delta", 4, "--mu", 0.2,
                   "--algos", "multilabel,filtered,brute",
                   "--no-modulation", "--seed", "r0", "--out", out)
    assert code == 0
    shown = capsys.readouterr().out
    assert "established" in shown and "multilabel" in shown
    with open(out, newline="") as f:
        rows = list(csv.DictReader(f))
    assert rows and set(r["algo"] for r in rows) == {
        "multilabel", "filtered", "brute"}
    summary = tmp_path / "search.summary.csv"
    assert summary.exists()
    report = cli.simcore.read_run_summary(summary)
    assert report.offered > 0


def test_run_with_modulation_and_validation(tmp_path, small_graph_file):
    code = run_cli("run", "--graph", small_graph_file, "--days", 4,
                   "--gamma", 2, "--mu", 0.2, "--levels", 2,
                   "--reach-factor", 1.6, "--validate", "--seed", "r1")
    assert code == 0


def test_run_omega_override(tmp_path, small_graph_file, capsys):
    code = run_cli("run", "--graph", small_graph_file, "--omega", 48,
                   "--days", 3, "--gamma", 2, "--mu", 0.1,
                   "--no-modulation", "--seed", "r2")
    assert code == 0
    assert "established" in capsys.readouterr().out


def test_config_file_supplies_defaults_cli_overrides(tmp_path):
    cfg = tmp_path / "gen.cfg"
    cfg.write_text("vertices = 8\nomega = 24\nseed = cfg  # comment\n")
    a = tmp_path / "a"
    run_cli("generate", "--config", cfg, "--out-dir", a)
    g = netgraph.load_graph(a / "graph_000.txt")
    assert (g.n_vertices, g.omega) == (8, 24)
    b = tmp_path / "b"
    run_cli("generate", f"--config={cfg}", "--vertices", 6, "--out-dir", b)
    g = netgraph.load_graph(b / "graph_000.txt")
    assert (g.n_vertices, g.omega) == (6, 24)  # flag beat the file


def test_config_file_rejects_garbage(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("vertices 8\n")
    with pytest.raises(SystemExit):
        run_cli("generate", "--config", cfg)


def test_verify_passes(capsys):
    code = run_cli("verify", "--instances", 40, "--max-vertices", 6,
                   "--max-omega", 10, "--seed", "v")
    assert code == 0
    assert "40 instances, 0 failures" in capsys.readouterr().out


def test_sweep_and_stats(tmp_path, capsys):
    out = tmp_path / "sweep"
    code = run_cli("sweep", "--vertices", 8, "--samples", 2, "--days", 3,
                   "--gamma", 2, "--mu", "0.2", "--omega", 16,
                   "--algos", "multilabel", "--no-modulation", "--seed", "s",
                   "--out-dir", out)
    assert code == 0
    pop = out / "population.csv"
    assert pop.exists()
    summaries = sorted(p for p in os.listdir(out) if p.endswith(".summary.csv"))
    assert len(summaries) == 2
    capsys.readouterr()
    code = run_cli("stats", "--runs", *[out / s for s in summaries],
                   "--out", tmp_path / "pop2.csv")
    assert code == 0
    shown = capsys.readouterr().out
    assert "utilization" in shown
    assert (tmp_path / "pop2.csv").exists()


def test_unknown_subcommand_rejected():
    with pytest.raises(SystemExit):
        run_cli("frobnicate")
