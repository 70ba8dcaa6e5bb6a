"""Acceptance gate: one test per shipping criterion, stated tolerances.

Every bundle is rebuilt from fixed seeds inside the module, so this file is
self-contained; expect a few minutes single-threaded (the n=30 directed
training set dominates). Measured margins at freeze time are noted inline.
"""

import json
import time

import numpy as np
import pytest

from nnergm.baselines import mcmc_mle, mple
from nnergm.cli import main as cli_main
from nnergm.estimator import degeneracy_scan, invert, standard_errors
from nnergm.graph import Graph, max_edges
from nnergm.sampler import exact_mean_stats, mean_stats, simulate_graphs
from nnergm.statistics import (
    Edges,
    ModelSpec,
    Mutual,
    Triangles,
    change_stats,
    compute_stats,
)
from nnergm.surrogate import (
    ArchConfig,
    PriorBox,
    SurrogateModel,
    TrainConfig,
    generate_training_set,
    train,
    validation_indices,
)


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def graph_with_edges(n, count, directed=False):
    """Deterministic graph: the first `count` dyads in row-major order."""
    adj = np.zeros((n, n), dtype=np.uint8)
    placed = 0
    for i in range(n):
        for j in range(i + 1, n):
            if placed == count:
                break
            adj[i, j] = 1
            if not directed:
                adj[j, i] = 1
            placed += 1
    return Graph(n, directed, adj)


def dyad_closed_form(te, tm, n):
    """E[(edges, mutual)] for the directed edges+mutual model."""
    z = 1.0 + 2.0 * np.exp(te) + np.exp(2.0 * te + tm)
    pairs = n * (n - 1) // 2
    e = pairs * (2.0 * np.exp(te) + 2.0 * np.exp(2.0 * te + tm)) / z
    m = pairs * np.exp(2.0 * te + tm) / z
    return np.stack([e, m], axis=-1)


def dyad_graph_sd(te, tm, n):
    """Exact per-graph standard deviation of (edges, mutual), same model."""
    w = np.stack([np.ones_like(te), 2.0 * np.exp(te), np.exp(2.0 * te + tm)], axis=-1)
    p = w / w.sum(axis=-1, keepdims=True)
    vals = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 1.0]])
    mean = p @ vals
    var = np.einsum("...s,sk->...k", p, vals ** 2) - mean ** 2
    return np.sqrt((n * (n - 1) // 2) * var)


# ----------------------------------------------------------- heavy bundles

@pytest.fixture(scope="module")
def er20_bundle():
    """ER n=20 surrogate: L=2000, M=200, box [-5, 5]."""
    spec = ModelSpec(20, False, (Edges(),))
    box = PriorBox((-5.0,), (5.0,))
    ds = generate_training_set(spec, box, L=2000, M=200, master_seed=101,
                               timestamp="2026-01-01T00:00:00+00:00")
    cfg = TrainConfig(epochs=1000, batch_size=64, seed=7)
    model = train(ds, ArchConfig(), cfg)
    return spec, box, ds, cfg, model


@pytest.fixture(scope="module")
def dyad10_bundle():
    """Directed n=10 edges+mutual surrogate: L=3000, M=500, box [-3, 3]^2."""
    spec = ModelSpec(10, True, (Edges(), Mutual()))
    box = PriorBox((-3.0, -3.0), (3.0, 3.0))
    ds = generate_training_set(spec, box, L=3000, M=500, master_seed=103,
                               timestamp="2026-01-01T00:00:00+00:00")
    cfg = TrainConfig(epochs=1000, batch_size=64, seed=7)
    model = train(ds, ArchConfig(), cfg)
    return spec, box, ds, cfg, model


@pytest.fixture(scope="module")
def dyad30_bundle():
    """Directed n=30 edges+mutual surrogate: L=3000, M=250, box [-3, 3]^2."""
    spec = ModelSpec(30, True, (Edges(), Mutual()))
    box = PriorBox((-3.0, -3.0), (3.0, 3.0))
    ds = generate_training_set(spec, box, L=3000, M=250, master_seed=104,
                               timestamp="2026-01-01T00:00:00+00:00")
    cfg = TrainConfig(epochs=3000, batch_size=64, seed=7)
    model = train(ds, ArchConfig(), cfg)
    return spec, box, ds, cfg, model


# -------------------------------------------------------------- criteria

def test_criterion_01_er_mean_curve():
    """Simulated E[edges] tracks 190*sigma(theta) on a 21-point grid.

    Margin note: worst |gap|/(4 se) ~ 0.5 at freeze; runtime ~5 s.
    """
    t_start = time.perf_counter()
    spec = ModelSpec(20, False, (Edges(),))
    grid = np.linspace(-5.0, 5.0, 21)
    for i, theta in enumerate(grid):
        mean, se = mean_stats(spec, np.array([theta]), 5000, seed=1000 + i)
        target = 190.0 * sigmoid(theta)
        assert abs(mean[0] - target) <= 4.0 * max(se[0], 1e-12), (
            f"theta={theta:+.1f}: mean={mean[0]:.3f} target={target:.3f} "
            f"4se={4 * se[0]:.3f}"
        )
    elapsed = time.perf_counter() - t_start
    assert elapsed <= 120.0, f"curve sweep took {elapsed:.1f}s (budget 120s)"


def test_criterion_02_surrogate_fit(er20_bundle):
    """Held-out RMSE <= 2.0 edges; max curve error <= 4.0 edges.

    Margin note: RMSE 0.58, max curve error 1.22 at freeze.
    """
    spec, box, ds, cfg, model = er20_bundle
    val = validation_indices(ds.L, cfg)
    pred = model.predict(ds.thetas[val])
    rmse = float(np.sqrt(np.mean((pred[:, 0] - ds.stats[val, 0]) ** 2)))
    assert rmse <= 2.0, f"held-out RMSE {rmse:.3f} edges"

    grid = np.linspace(-5.0, 5.0, 101)
    curve_err = np.abs(model.predict(grid[:, None])[:, 0] - 190.0 * sigmoid(grid))
    assert curve_err.max() <= 4.0, (
        f"max curve error {curve_err.max():.3f} at theta="
        f"{grid[np.argmax(curve_err)]:+.2f}"
    )


def test_criterion_03_dyad_model_grid(dyad10_bundle):
    """Predictions within 4 combined error bands of the dyad closed form.

    Band per statistic = 4 * (exact MC standard error at M=500 + held-out
    RMSE of that statistic). Margin note: worst gap/band 0.56 at freeze.
    """
    spec, box, ds, cfg, model = dyad10_bundle
    val = validation_indices(ds.L, cfg)
    rmse = np.sqrt(np.mean((model.predict(ds.thetas[val]) - ds.stats[val]) ** 2,
                           axis=0))

    axis = np.linspace(-3.0, 3.0, 11)
    te, tm = np.meshgrid(axis, axis, indexing="ij")
    grid = np.stack([te.ravel(), tm.ravel()], axis=1)
    preds = model.predict(grid)
    closed = dyad_closed_form(grid[:, 0], grid[:, 1], spec.n)
    se_mc = dyad_graph_sd(grid[:, 0], grid[:, 1], spec.n) / np.sqrt(ds.metadata["M"])
    band = 4.0 * (se_mc + rmse)
    gap = np.abs(preds - closed)
    worst = (gap / band).max(axis=0)
    assert np.all(gap <= band), f"worst gap/band per statistic: {worst}"


def test_criterion_04_estimation_study(dyad30_bundle):
    """20 replications at theta*=(-1, 2), n=30: accuracy and MPLE agreement.

    Margin note at freeze: median error (0.060, 0.145) vs 0.3 allowed;
    per-replication agreement max (0.081, 0.132) vs 0.2 allowed.
    """
    spec, box, ds, cfg, model = dyad30_bundle
    theta_star = np.array([-1.0, 2.0])
    errors, agreements = [], []
    for rep in range(20):
        g_obs = simulate_graphs(spec, theta_star, 1, seed=9000 + rep)[0]
        t_obs = compute_stats(spec, g_obs)
        fit = invert(model, t_obs, box, seed=rep)
        baseline = mple(spec, g_obs).theta_hat
        errors.append(np.abs(fit.theta_hat - theta_star))
        agreements.append(np.abs(fit.theta_hat - baseline))
    errors = np.array(errors)
    agreements = np.array(agreements)
    med = np.median(errors, axis=0)
    assert np.all(med <= 0.3), f"median |error| per coordinate: {med}"
    worst = agreements.max(axis=0)
    assert np.all(worst <= 0.2), f"max surrogate-vs-MPLE gap per coordinate: {worst}"


def test_criterion_05_sampler_matches_enumeration():
    """Chain means agree with brute-force oracles at 4 MC standard errors."""
    families = [
        lambda n: ModelSpec(n, False, (Edges(),)),
        lambda n: ModelSpec(n, False, (Edges(), Triangles())),
        lambda n: ModelSpec(n, True, (Edges(), Mutual())),
    ]
    rng = np.random.default_rng(2468)
    for fam_idx, make_spec in enumerate(families):
        for n in (3, 4, 5):
            spec = make_spec(n)
            for rep in range(20):
                theta = rng.uniform(-2.0, 2.0, spec.d)
                exact = exact_mean_stats(spec, theta)
                seed = 100_000 + 1000 * fam_idx + 50 * n + rep
                mean, se = mean_stats(spec, theta, 1000, seed=seed)
                gap = np.abs(mean - exact)
                tol = 4.0 * np.maximum(se, 1e-3)
                assert np.all(gap <= tol), (
                    f"family {fam_idx}, n={n}, theta={theta}: gap {gap} vs {tol}"
                )


def test_criterion_05_exact_er_closed_form():
    """Enumeration reproduces slots * sigma(theta) to 1e-10 for pure ER."""
    for n in (3, 4, 5):
        spec = ModelSpec(n, False, (Edges(),))
        slots = max_edges(n, False)
        for theta in np.linspace(-6.0, 6.0, 13):
            exact = exact_mean_stats(spec, np.array([theta]))
            assert abs(exact[0] - slots * sigmoid(theta)) <= 1e-10


def test_criterion_06_mple_closed_form():
    """MPLE equals logit(observed density) to 1e-10 on 100 random graphs."""
    rng = np.random.default_rng(42)
    for _ in range(100):
        n = int(rng.integers(5, 13))
        slots = max_edges(n, False)
        m = int(rng.integers(1, slots))
        chosen = set(rng.permutation(slots)[:m].tolist())
        adj = np.zeros((n, n), dtype=np.uint8)
        k = 0
        for i in range(n):
            for j in range(i + 1, n):
                if k in chosen:
                    adj[i, j] = adj[j, i] = 1
                k += 1
        g = Graph(n, False, adj)
        spec = ModelSpec(n, False, (Edges(),))
        fit = mple(spec, g)
        target = np.log(m / (slots - m))
        assert abs(fit.theta_hat[0] - target) <= 1e-10


def test_criterion_07_mcmc_mle_fixed_point():
    """ER n=20 with t_obs=95 solves to theta in [-0.1, 0.1]; score holds.

    Margin note: theta_hat = +0.006, score gap 0.05 vs 0.63 allowed.
    """
    spec = ModelSpec(20, False, (Edges(),))
    g_obs = graph_with_edges(20, 95)
    fit = mcmc_mle(spec, g_obs, seed=31, theta0=np.array([1.0]))
    assert -0.1 <= fit.theta_hat[0] <= 0.1, f"theta_hat={fit.theta_hat[0]:+.4f}"
    mean, se = mean_stats(spec, fit.theta_hat, 2000, seed=99)
    gap = abs(95.0 - mean[0])
    assert gap <= 4.0 * se[0], f"score gap {gap:.3f} vs {4 * se[0]:.3f}"
    assert fit.converged


def test_criterion_08_invariant_change_statistics():
    """t(g + ij) - t(g) equals the change statistic, exactly."""
    specs = [
        ModelSpec(7, False, (Edges(), Triangles())),
        ModelSpec(6, True, (Edges(), Mutual())),
    ]
    rng = np.random.default_rng(7)
    for spec in specs:
        for _ in range(25):
            adj = (rng.random((spec.n, spec.n)) < 0.4).astype(np.uint8)
            np.fill_diagonal(adj, 0)
            if not spec.directed:
                adj = np.triu(adj, 1)
                adj = adj + adj.T
            g = Graph(spec.n, spec.directed, adj.copy())
            i, j = rng.integers(0, spec.n), rng.integers(0, spec.n)
            if i == j:
                continue
            delta = change_stats(spec, g, int(i), int(j))
            adj2 = adj.copy()
            sign = -1.0 if adj2[i, j] else 1.0
            adj2[i, j] = 1 - adj2[i, j]
            if not spec.directed:
                adj2[j, i] = adj2[i, j]
            g2 = Graph(spec.n, spec.directed, adj2)
            diff = compute_stats(spec, g2) - compute_stats(spec, g)
            assert np.array_equal(diff, sign * delta)


def test_criterion_08_invariant_jacobian(er20_bundle):
    """Analytic input jacobian matches central differences to 1e-4 relative."""
    _, _, _, _, model = er20_bundle
    h = 1e-4
    for theta in (-3.0, -1.0, 0.0, 1.5, 3.5):
        jac = model.input_jacobian([theta])
        fd = (model.predict([theta + h]) - model.predict([theta - h])) / (2 * h)
        rel = np.abs(fd - jac[:, 0]) / np.maximum(1.0, np.abs(jac[:, 0]))
        assert np.max(rel) <= 1e-4


def test_criterion_08_invariant_parallel_determinism():
    """Worker count never changes the generated dataset (bit-exact)."""
    spec = ModelSpec(8, False, (Edges(),))
    box = PriorBox((-2.0,), (2.0,))
    a = generate_training_set(spec, box, 8, 20, master_seed=55,
                              max_parallelism=1, timestamp="t")
    b = generate_training_set(spec, box, 8, 20, master_seed=55,
                              max_parallelism=3, timestamp="t")
    assert a.to_csv() == b.to_csv()


def test_criterion_08_invariant_model_roundtrip(er20_bundle, tmp_path):
    """Save/load reproduces predictions exactly (beyond the 1e-15 target)."""
    _, _, _, _, model = er20_bundle
    path = str(tmp_path / "model.json")
    model.save(path)
    back = SurrogateModel.load(path)
    grid = np.linspace(-5.0, 5.0, 33)[:, None]
    assert np.array_equal(back.predict(grid), model.predict(grid))


def test_criterion_08_invariant_manifest_replay(tmp_path):
    """Replaying a run manifest reproduces the output byte-for-byte."""
    spec_path = tmp_path / "spec.json"
    spec_path.write_text(json.dumps(
        {"n": 6, "directed": False, "terms": [{"kind": "edges"}]}))
    out = str(tmp_path / "draws.csv")
    rc = cli_main(["simulate", "--spec", str(spec_path), "--theta", "0.4",
                   "--M", "6", "--seed", "12", "--out", out])
    assert rc == 0
    original = open(out, "rb").read()
    replay_dir = tmp_path / "replay"
    rc = cli_main(["replay", out + ".manifest.json", "--out-dir", str(replay_dir)])
    assert rc == 0
    assert open(replay_dir / "draws.csv", "rb").read() == original


def test_criterion_09_degeneracy_scan(er20_bundle):
    """Scan flags theta = -5/0/+5 as near-empty/interior/near-complete.

    Margin note: predicted densities 0.0006 / 0.500 / 0.9997 at freeze.
    """
    _, _, _, _, model = er20_bundle
    scan = degeneracy_scan(model, grid_points_per_dim=21, thresholds=(0.02, 0.98))
    assert scan.flag_at([-5.0]) == "near-empty"
    assert scan.flag_at([0.0]) == "interior"
    assert scan.flag_at([5.0]) == "near-complete"


def test_criterion_10_standard_errors():
    """SE at the ER null is within 10% of the binomial closed form 0.1451."""
    spec = ModelSpec(20, False, (Edges(),))
    se = standard_errors(spec, np.array([0.0]), M=10000, seed=17)
    assert abs(se[0] - 0.1451) <= 0.1 * 0.1451, f"se={se[0]:.5f}"
