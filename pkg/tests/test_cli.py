"""End-to-end tests of the file-based command line interface."""

import json
import os

import numpy as np
import pytest

from nnergm.cli import main


def write_spec(tmp_path, name="spec.json", n=3, directed=False, terms=None, **extra):
    data = {"n": n, "directed": directed,
            "terms": terms or [{"kind": "edges"}]}
    data.update(extra)
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def write_graph(tmp_path, name, n, edges, directed=False):
    lines = [f"n={n} directed={1 if directed else 0}"]
    lines += [f"{i} {j}" for i, j in edges]
    path = tmp_path / name
    path.write_text("\n".join(lines) + "\n")
    return str(path)


def first_edges(n, count):
    """The first `count` dyads in row-major i<j order."""
    out = []
    for i in range(n):
        for j in range(i + 1, n):
            if len(out) == count:
                return out
            out.append((i, j))
    return out


# ------------------------------------------------------------------ basics

def test_version_flag_exits_zero():
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0


def test_unknown_subcommand_exits_one():
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_missing_seed_is_usage_error(tmp_path):
    spec = write_spec(tmp_path)
    with pytest.raises(SystemExit) as exc:
        main(["simulate", "--spec", spec, "--theta", "0",
              "--M", "3", "--out", str(tmp_path / "x.csv")])
    assert exc.value.code == 1


# ------------------------------------------------------------------ oracle

def test_oracle_prints_exact_mean(tmp_path, capsys):
    spec = write_spec(tmp_path)  # 3 nodes, edge count only
    rc = main(["oracle", "--spec", spec, "--theta", "0"])
    assert rc == 0
    out = capsys.readouterr().out.strip()
    assert float(out.split()[0]) == pytest.approx(1.5, abs=1e-12)


def test_oracle_writes_csv_and_manifest(tmp_path):
    spec = write_spec(tmp_path)
    out = str(tmp_path / "oracle.csv")
    assert main(["oracle", "--spec", spec, "--theta", "0", "--out", out]) == 0
    assert open(out).read().startswith("stat_0\n")
    manifest = json.load(open(out + ".manifest.json"))
    assert manifest["subcommand"] == "oracle"
    assert manifest["outputs"] == [out]


def test_oracle_too_many_dyads_exits_two(tmp_path):
    spec = write_spec(tmp_path, n=10)  # 45 dyads > enumeration cap
    assert main(["oracle", "--spec", spec, "--theta", "0"]) == 2


# ---------------------------------------------------------------- simulate

def test_simulate_writes_draws_and_manifest(tmp_path):
    spec = write_spec(tmp_path, n=6)
    out = str(tmp_path / "draws.csv")
    rc = main(["simulate", "--spec", spec, "--theta", "-0.5",
               "--M", "5", "--seed", "9", "--out", out])
    assert rc == 0
    lines = open(out).read().strip().splitlines()
    assert lines[0] == "stat_0"
    assert len(lines) == 6
    manifest = json.load(open(out + ".manifest.json"))
    assert manifest["options"]["theta"] == [-0.5]
    assert manifest["options"]["seed"] == 9


def test_simulate_replay_is_byte_exact(tmp_path):
    spec = write_spec(tmp_path, n=6)
    out = str(tmp_path / "draws.csv")
    main(["simulate", "--spec", spec, "--theta", "0.3",
          "--M", "8", "--seed", "4", "--out", out])
    original = open(out, "rb").read()
    replay_dir = tmp_path / "replay"
    rc = main(["replay", out + ".manifest.json", "--out-dir", str(replay_dir)])
    assert rc == 0
    assert open(replay_dir / "draws.csv", "rb").read() == original


@pytest.mark.parametrize("init", ["random:0.4", "empty"])
def test_simulate_init_variants(tmp_path, init):
    spec = write_spec(tmp_path, n=6)
    out = str(tmp_path / "d.csv")
    assert main(["simulate", "--spec", spec, "--theta", "0", "--M", "2",
                 "--seed", "1", "--init", init, "--out", out]) == 0


def test_simulate_init_from_file(tmp_path):
    spec = write_spec(tmp_path, n=6)
    gpath = write_graph(tmp_path, "g0.txt", 6, first_edges(6, 7))
    out = str(tmp_path / "d.csv")
    assert main(["simulate", "--spec", spec, "--theta", "0", "--M", "2",
                 "--seed", "1", "--init", f"file:{gpath}", "--out", out]) == 0


def test_simulate_bad_init_exits_one(tmp_path):
    spec = write_spec(tmp_path, n=6)
    assert main(["simulate", "--spec", spec, "--theta", "0", "--M", "2",
                 "--seed", "1", "--init", "bogus",
                 "--out", str(tmp_path / "d.csv")]) == 1


def test_missing_spec_file_exits_one(tmp_path):
    assert main(["simulate", "--spec", str(tmp_path / "nope.json"),
                 "--theta", "0", "--M", "2", "--seed", "1",
                 "--out", str(tmp_path / "d.csv")]) == 1


def test_malformed_theta_exits_one(tmp_path):
    spec = write_spec(tmp_path, n=6)
    assert main(["simulate", "--spec", spec, "--theta", "zero", "--M", "2",
                 "--seed", "1", "--out", str(tmp_path / "d.csv")]) == 1


# ---------------------------------------------------------------- pipeline

def test_gen_data_replay_reproduces_dataset(tmp_path):
    spec = write_spec(tmp_path, n=6)
    out = str(tmp_path / "rows.csv")
    rc = main(["gen-data", "--spec", spec, "--box=-2:2", "--L", "6",
               "--M", "10", "--seed", "5", "--out", out])
    assert rc == 0
    rows = open(out, "rb").read()
    meta = open(str(tmp_path / "rows.meta.json"), "rb").read()
    replay_dir = tmp_path / "replay"
    assert main(["replay", out + ".manifest.json",
                 "--out-dir", str(replay_dir)]) == 0
    assert open(replay_dir / "rows.csv", "rb").read() == rows
    assert open(replay_dir / "rows.meta.json", "rb").read() == meta


def test_full_pipeline_recovers_coefficient(tmp_path):
    """gen-data -> train -> estimate lands near the true ER coefficient."""
    spec = write_spec(tmp_path, n=8)
    data = str(tmp_path / "train.csv")
    model = str(tmp_path / "model.json")
    report = str(tmp_path / "fit.json")

    assert main(["gen-data", "--spec", spec, "--box=-3:3", "--L", "60",
                 "--M", "60", "--seed", "13", "--out", data]) == 0
    assert main(["train", "--data", data, "--out", model, "--seed", "2",
                 "--epochs", "300", "--hidden", "16,8", "--batch-size", "8"]) == 0
    losses = str(tmp_path / "model.losses.csv")
    lines = open(losses).read().strip().splitlines()
    assert lines[0] == "epoch,train_loss,val_loss"
    assert len(lines) == 301

    # 14 of 28 dyads on: the median graph at theta = 0
    assert main(["estimate", "--model", model, "--t-obs", "14",
                 "--seed", "3", "--out", report]) == 0
    fit = json.load(open(report))
    assert fit["method"] == "surrogate-inversion"
    assert abs(fit["theta_hat"][0]) <= 0.35
    assert fit["box"] == {"lower": [-3.0], "upper": [3.0]}


def test_estimate_from_graph_file(tmp_path, er10_files):
    gpath = write_graph(tmp_path, "obs.txt", 10, first_edges(10, 22))
    report = str(tmp_path / "fit.json")
    rc = main(["estimate", "--model", er10_files["model"], "--graph", gpath,
               "--seed", "3", "--out", report])
    assert rc == 0
    fit = json.load(open(report))
    assert fit["t_obs"] == [22.0]
    assert np.isfinite(fit["theta_hat"][0])


def test_estimate_shape_mismatch_exits_one(tmp_path, er10_files):
    rc = main(["estimate", "--model", er10_files["model"], "--t-obs", "1,2",
               "--seed", "3", "--out", str(tmp_path / "fit.json")])
    assert rc == 1


# ---------------------------------------------------------------- baselines

def test_mple_cli_closed_form(tmp_path):
    spec = write_spec(tmp_path, n=8)
    gpath = write_graph(tmp_path, "g.txt", 8, first_edges(8, 14))
    out = str(tmp_path / "mple.json")
    assert main(["mple", "--spec", spec, "--graph", gpath, "--out", out]) == 0
    fit = json.load(open(out))
    assert fit["theta_hat"][0] == pytest.approx(0.0, abs=1e-10)
    assert fit["terms"] == ["edges"]


def test_mcmc_mle_cli(tmp_path):
    spec = write_spec(tmp_path, n=8)
    gpath = write_graph(tmp_path, "g.txt", 8, first_edges(8, 14))
    out = str(tmp_path / "rm.json")
    rc = main(["mcmc-mle", "--spec", spec, "--graph", gpath, "--seed", "3",
               "--R", "50", "--max-iter", "120", "--out", out])
    assert rc == 0
    fit = json.load(open(out))
    assert abs(fit["theta_hat"][0]) <= 0.3
    assert isinstance(fit["trajectory"], list)
    assert fit["method"] == "mcmc-mle"


def test_gof_cli(tmp_path):
    spec = write_spec(tmp_path, n=8)
    gpath = write_graph(tmp_path, "g.txt", 8, first_edges(8, 14))
    out = str(tmp_path / "gof.csv")
    rc = main(["gof", "--spec", spec, "--graph", gpath, "--theta", "0",
               "--extra-terms", "triangles", "--M", "60", "--seed", "8",
               "--out", out])
    assert rc == 0
    lines = open(out).read().strip().splitlines()
    assert lines[0].startswith("statistic,observed,sim_mean")
    assert lines[1].startswith("edges,")
    assert lines[2].startswith("triangles,")


# ---------------------------------------------------------------- analysis

def test_scan_cli_uses_model_box(tmp_path, er10_files):
    out = str(tmp_path / "scan.csv")
    assert main(["scan", "--model", er10_files["model"], "--out", out]) == 0
    lines = open(out).read().strip().splitlines()
    assert lines[0] == "theta_0,density,flag"
    assert len(lines) == 22
    flags = {ln.rsplit(",", 1)[1] for ln in lines[1:]}
    assert {"near-empty", "interior", "near-complete"} <= flags


def test_scan_malformed_thresholds_exits_one(tmp_path, er10_files):
    assert main(["scan", "--model", er10_files["model"], "--thresholds", "0.5",
                 "--out", str(tmp_path / "scan.csv")]) == 1


def test_figures_outputs_and_replay(tmp_path, er10_files):
    fig_dir = str(tmp_path / "figs")
    rc = main(["figures", "--model", er10_files["model"],
               "--data", er10_files["dataset"], "--out-dir", fig_dir])
    assert rc == 0
    names = ["pred_vs_test.csv", "train_points.csv", "curve.csv"]
    for name in names:
        assert os.path.exists(os.path.join(fig_dir, name))
    curve_header = open(os.path.join(fig_dir, "curve.csv")).readline().strip()
    assert "theoretical_stat_0" in curve_header  # pure ER has a closed form

    originals = {n: open(os.path.join(fig_dir, n), "rb").read() for n in names}
    replay_dir = str(tmp_path / "figs-replay")
    assert main(["replay", os.path.join(fig_dir, "manifest.json"),
                 "--out-dir", replay_dir]) == 0
    for name in names:
        assert open(os.path.join(replay_dir, name), "rb").read() == originals[name]


def test_figures_fingerprint_mismatch_exits_one(tmp_path, er10_files):
    tampered = tmp_path / "tampered.csv"
    text = open(er10_files["dataset"]).read()
    first, rest = text.split("\n", 1)
    tampered.write_text(first + "\n" + rest.replace("0", "1", 1))
    rc = main(["figures", "--model", er10_files["model"],
               "--data", str(tampered), "--out-dir", str(tmp_path / "f")])
    assert rc == 1
