import json
import subprocess
import sys

import pytest

from rigest.cli import main
from rigest.io import read_edgelist


def run(*argv):
    return subprocess.run(
        [sys.executable, "-m", "rigest", *map(str, argv)], capture_output=True, text=True
    )


def test_generate_complete_graph(tmp_path, capsys):
    out = tmp_path / "k5.txt"
    assert main(["generate", "--n", "5", "--m", "1", "--p", "1", "--out", str(out)]) == 0
    assert read_edgelist(out).num_edges == 10
    stdout = capsys.readouterr().out
    assert stdout.startswith("# command=generate")
    assert "edges=10" in stdout


def test_generate_is_byte_identical_on_rerun(tmp_path):
    a, b = tmp_path / "a.txt", tmp_path / "b.txt"
    for path in (a, b):
        res = run("generate", "--n", 600, "--lambda", 9, "--mu", 3, "--seed", 4,
                  "--out", path, "--attrs", str(path) + ".attrs")
        assert res.returncode == 0, res.stderr
    assert a.read_bytes() == b.read_bytes()
    assert (tmp_path / "a.txt.attrs").read_bytes() == (tmp_path / "b.txt.attrs").read_bytes()


def test_generate_argument_errors(tmp_path, capsys):
    out = str(tmp_path / "x.txt")
    assert main(["generate", "--n", "5", "--m", "2", "--out", out]) == 2
    assert main(["generate", "--n", "5", "--m", "2", "--p", "0.1", "--mu", "1", "--out", out]) == 2
    assert main(["generate", "--n", "5", "--m", "2", "--p", "1.5", "--out", out]) == 2
    assert "error" in capsys.readouterr().err


def _triangle_file(tmp_path):
    path = tmp_path / "tri.txt"
    path.write_text("# rig-edgelist n=3\n1 2\n1 3\n2 3\n")
    return path


def test_estimate_triangle(tmp_path, capsys):
    path = _triangle_file(tmp_path)
    assert main(["estimate", str(path), "--ambient-n", "3", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["lambda_hat"] == 2
    assert data["mu1_hat"] == 0
    assert data["transitivity"] == 1
    assert data["mu2_hat"] is None


def test_estimate_rejects_small_ambient(tmp_path):
    path = _triangle_file(tmp_path)
    assert main(["estimate", str(path), "--ambient-n", "2"]) == 2


def test_estimate_with_node_file(tmp_path, capsys):
    path = _triangle_file(tmp_path)
    nodes = tmp_path / "nodes.txt"
    nodes.write_text("1 3\n")
    assert main(["estimate", str(path), "--ambient-n", "3", "--nodes-file", str(nodes),
                 "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["n0"] == 2 and data["n_k2"] == 1


def test_count_fast_only_skips_triangles(tmp_path, capsys):
    from rigest.motifs import op_counter

    path = _triangle_file(tmp_path)
    op_counter.clear()
    assert main(["count", str(path), "--fast-only", "--json"]) == 0
    assert op_counter["triangle_calls"] == 0
    data = json.loads(capsys.readouterr().out)
    assert data["n_k3"] is None and data["n_s2"] == 3


def test_generate_sample_count_pipeline(tmp_path, capsys):
    g_path, s_path, nodes = tmp_path / "g.txt", tmp_path / "s.txt", tmp_path / "nodes.txt"
    assert main(["generate", "--n", "500", "--lambda", "9", "--mu", "3", "--seed", "2",
                 "--out", str(g_path)]) == 0
    assert main(["sample", str(g_path), "--n0", "200", "--seed", "3", "--out", str(s_path),
                 "--nodes-out", str(nodes)]) == 0
    assert main(["count", str(s_path), "--json"]) == 0
    counts = json.loads(capsys.readouterr().out.splitlines()[-1])
    sub = read_edgelist(s_path)
    assert counts["n0"] == 200 and counts["n_k2"] == sub.num_edges
    assert len(nodes.read_text().split()) == 200


def test_mcf_triangle(capsys):
    assert main(["mcf", "triangle"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out[0].startswith("# 3-cycle")
    assert sorted(line.split()[0] for line in out[1:]) == ["{12,13,23}", "{123}"]
    assert main(["mcf", "3-path", "--json"]) == 0
    assert len(json.loads(capsys.readouterr().out)["families"]) == 4


def test_density_balanced(capsys):
    assert main(["density", "2-star", "--regime", "balanced", "--mu", "2"]) == 0
    out = capsys.readouterr().out
    assert "(1+μ)μ³m⁻²" in out
    assert main(["density", "2-star", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["sparse"] == "m p^3 + m^2 p^4"


def test_density_warns_outside_sparse_regime(capsys):
    assert main(["density", "1-star", "--at", "100,0.1"]) == 0
    captured = capsys.readouterr()
    assert "warning" in captured.err and "warning" not in captured.out


def test_unknown_motif_exit_code(capsys):
    assert main(["mcf", "pentagon"]) == 2
    assert "pentagon" in capsys.readouterr().err


def test_malformed_input_exit_code(tmp_path, capsys):
    bad = tmp_path / "bad.txt"
    bad.write_text("# rig-edgelist n=3\n2 1\n")
    assert main(["count", str(bad)]) == 2
    assert "line 2" in capsys.readouterr().err
    assert main(["count", str(tmp_path / "missing.txt")]) == 2


def test_experiment_rerun_identical(tmp_path):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text("kind = sweep\nlambda = 9\nmu = 3\nn_grid = 100,200\nreplicates = 2\nseed = 3\n")
    for name, threads in (("a", "1"), ("b", "3")):
        res = run("experiment", cfg, "--out", tmp_path / name, "--plot-data", "--threads", threads)
        assert res.returncode == 0, res.stderr
    for f in ("results.csv", "results.json", "plot_data.json"):
        assert (tmp_path / "a" / f).read_bytes() == (tmp_path / "b" / f).read_bytes()


def test_experiment_bad_config(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("kind = sweep\nwidth = 3\n")
    assert main(["experiment", str(cfg), "--out", str(tmp_path / "o")]) == 2
    assert "line 2" in capsys.readouterr().err


@pytest.mark.parametrize("argv", [[], ["nonsense"]])
def test_usage_errors(argv):
    with pytest.raises(SystemExit) as exc:
        main(argv)
    assert exc.value.code == 2
