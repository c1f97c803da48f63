from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from estgraph.cli import main

GRAPH = ["--model", "gnm", "--n", "200", "--m", "600"]


def run(*argv):
    return main([str(a) for a in argv])


def test_gen_writes_edge_list(tmp_path):
    out = tmp_path / "g.txt"
    assert run("gen", *GRAPH, "--weights", 1, 100, "--out", out) == 0
    head = out.read_text().splitlines()[0].split()
    assert head[:2] == ["200", "600"]


def test_cluster_json(tmp_path, capsys):
    assert run("cluster", *GRAPH, "--beta", 0.2, "--seeds", 3) in (0, 1)
    rep = json.loads(capsys.readouterr().out)
    assert rep["config"]["algorithm"] == "cluster"


def test_spanner_save_and_verify(tmp_path, capsys):
    sp = tmp_path / "sp.json"
    assert run("spanner", *GRAPH, "--k", 2, "--save", sp, "--format", "text") in (0, 1)
    capsys.readouterr()
    assert run("verify", *GRAPH, "--artifact", sp, "--samples", 40, "--format", "json") == 0
    assert json.loads(capsys.readouterr().out)["kind"] == "spanner"


def test_hopset_save_and_verify(tmp_path, capsys):
    hs = tmp_path / "hs.json"
    assert run("hopset", *GRAPH, "--pairs", 10, "--save", hs) in (0, 1)
    assert json.loads(hs.read_text())["format"] == "estgraph-hopset"
    capsys.readouterr()
    assert run("verify", *GRAPH, "--artifact", hs, "--samples", 20, "--hops", 200) == 0


def test_oracle_build_query_and_mismatch(tmp_path, capsys):
    idx = tmp_path / "o.json"
    g = GRAPH + ["--weights", "1", "1000"]
    assert run("oracle", "build", *g, "--out", idx, "--repetitions", 1) == 0
    capsys.readouterr()
    assert run("oracle", "query", *g, "--index", idx, "--pair", 0, 5, "--pair", 3, 3) == 0
    out = capsys.readouterr().out
    assert out.strip()
    assert run("oracle", "query", *GRAPH, "--index", idx, "--pair", 0, 5) == 2
    assert "different graph" in capsys.readouterr().err


def test_experiment_config(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"algorithm": "spanner", "graph": {"model": "cycle", "n": 60},
                               "params": {"k": 2}, "seeds": 2}))
    out = tmp_path / "r.json"
    assert run("experiment", cfg, "--out", out) == 0
    first = out.read_text()
    assert run("experiment", cfg, "--out", out) == 0
    assert out.read_text() == first


def test_errors_exit_2(tmp_path, capsys):
    assert run("verify", "--graph", tmp_path / "missing.txt", "--artifact", tmp_path / "x.json") == 2
    with pytest.raises(SystemExit):
        run("spanner", *GRAPH)


def test_module_entry_point_is_deterministic(tmp_path):
    cmd = [sys.executable, "-m", "estgraph", "cluster", "--model", "path", "--n", "300",
           "--beta", "0.1", "--seeds", "2", "--seed", "7"]
    a = subprocess.run(cmd, capture_output=True, text=True, check=False)
    env = dict(os.environ, PYTHONHASHSEED="123")
    b = subprocess.run(cmd, capture_output=True, text=True, check=False, env=env)
    assert a.returncode in (0, 1) and a.stdout == b.stdout
