"""Command-line pipeline: every subcommand reads files, writes files.

Each run writes a JSON manifest next to its primary output recording the
resolved options; `nnergm replay <manifest>` re-executes the run and
reproduces the outputs byte-for-byte. Randomized subcommands require an
explicit --seed.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from datetime import datetime, timezone

import numpy as np

from . import __version__
from .baselines import RobbinsMonroConfig, mcmc_mle, mple
from .errors import (
    EstimationError,
    GraphFormatError,
    NnergmError,
    SamplerError,
    SpecError,
    TrainingDivergedError,
    EnumerationError,
)
from .estimator import degeneracy_scan, goodness_of_fit, invert
from .graph import max_edges, read_edge_list
from .io import atomic_write_text
from .sampler import (
    Empty,
    Given,
    RandomDensity,
    SamplerConfig,
    exact_mean_stats,
    simulate_stats,
)
from .statistics import (
    Edges,
    ModelSpec,
    Mutual,
    compute_stats,
    parse_dyad_covariate_csv,
    parse_node_attributes_csv,
    term_from_dict,
)
from .surrogate import (
    ArchConfig,
    PriorBox,
    SurrogateModel,
    TrainConfig,
    TrainingDataset,
    generate_training_set,
    train,
)

_USAGE_ERRORS = (
    SpecError,
    GraphFormatError,
    ValueError,
    KeyError,
    FileNotFoundError,
    IsADirectoryError,
    NotADirectoryError,
    json.JSONDecodeError,
)
_NUMERICAL_ERRORS = (
    SamplerError,
    EstimationError,
    TrainingDivergedError,
    EnumerationError,
    np.linalg.LinAlgError,
    FloatingPointError,
)


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 (not 2) on usage errors."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


# ---------------------------------------------------------------- parsing


def _parse_theta(text: str) -> list:
    try:
        return [float(v) for v in text.split(",") if v.strip() != ""]
    except ValueError:
        raise ValueError(f"--theta expects comma-separated reals, got {text!r}")


def _parse_box(text: str) -> PriorBox:
    lower, upper = [], []
    for part in text.split(","):
        pieces = part.split(":")
        if len(pieces) != 2:
            raise ValueError(f"--box expects lo:hi[,lo:hi...], got {text!r}")
        lower.append(float(pieces[0]))
        upper.append(float(pieces[1]))
    return PriorBox(tuple(lower), tuple(upper))


def _parse_init(text: str):
    if text == "empty":
        return Empty()
    if text.startswith("random:"):
        return RandomDensity(float(text.split(":", 1)[1]))
    if text.startswith("file:"):
        path = text.split(":", 1)[1]
        with open(path, "r", encoding="utf-8") as fh:
            return Given(read_edge_list(fh.read()))
    raise ValueError(f"--init expects empty|random:<p>|file:<path>, got {text!r}")


def _parse_extra_terms(text: str):
    terms = []
    for token in text.split(","):
        token = token.strip()
        if not token:
            continue
        name, _, arg = token.partition(":")
        if name == "edges":
            terms.append({"kind": "edges"})
        elif name == "mutual":
            terms.append({"kind": "mutual"})
        elif name == "triangles":
            terms.append({"kind": "triangles"})
        elif name == "gwesp":
            terms.append({"kind": "gwesp", "decay": float(arg)})
        elif name == "node_match":
            terms.append({"kind": "node_match", "attribute": arg})
        elif name == "dyad_cov":
            terms.append({"kind": "dyad_cov", "covariate": arg})
        else:
            raise ValueError(f"unknown term {token!r} in --extra-terms")
    return [term_from_dict(t) for t in terms]


def load_spec_file(path: str) -> ModelSpec:
    """Build a ModelSpec from a JSON spec file, resolving CSV references."""
    with open(path, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    base = os.path.dirname(os.path.abspath(path))
    n = int(data["n"])
    directed = bool(data["directed"])
    terms = tuple(term_from_dict(t) for t in data["terms"])

    attrs = {k: tuple(str(v) for v in vals)
             for k, vals in data.get("node_attributes", {}).items()}
    for name, rel in data.get("node_attribute_files", {}).items():
        with open(os.path.join(base, rel), "r", encoding="utf-8") as fh:
            parsed = parse_node_attributes_csv(fh.read(), n)
        if name not in parsed:
            raise SpecError(f"attribute {name!r} not found in {rel}")
        attrs[name] = parsed[name]

    covs = {k: np.array(v, dtype=np.float64)
            for k, v in data.get("dyad_covariates", {}).items()}
    for name, rel in data.get("dyad_covariate_files", {}).items():
        with open(os.path.join(base, rel), "r", encoding="utf-8") as fh:
            covs[name] = parse_dyad_covariate_csv(fh.read(), n, directed)

    return ModelSpec(n, directed, terms, node_attributes=attrs, dyad_covariates=covs)


def _load_graph(path: str):
    with open(path, "r", encoding="utf-8") as fh:
        return read_edge_list(fh.read())


def _sampler_config(opts: dict) -> SamplerConfig:
    return SamplerConfig(
        burn_in_sweeps=opts.get("burn_in", 50),
        thinning_sweeps=opts.get("thin", 5),
        init=_parse_init(opts.get("init", "empty")),
    )


def _stats_csv(draws: np.ndarray) -> str:
    header = ",".join(f"stat_{k}" for k in range(draws.shape[1]))
    lines = [header]
    for row in draws:
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"


# ------------------------------------------------------------- commands
#
# Each runner takes the resolved-options dict recorded in the manifest and
# returns (inputs, outputs) as path lists, so replay can re-dispatch it.


def _run_simulate(opts: dict):
    spec = load_spec_file(opts["spec"])
    theta = opts["theta"]
    draws = simulate_stats(spec, theta, opts["M"], opts["seed"], _sampler_config(opts))
    atomic_write_text(opts["out"], _stats_csv(draws))
    return [opts["spec"]], [opts["out"]]


def _run_oracle(opts: dict):
    spec = load_spec_file(opts["spec"])
    means = exact_mean_stats(spec, opts["theta"])
    line = " ".join(repr(float(v)) for v in means)
    print(line)
    outputs = []
    if opts.get("out"):
        header = ",".join(f"stat_{k}" for k in range(means.size))
        atomic_write_text(opts["out"], header + "\n" +
                          ",".join(repr(float(v)) for v in means) + "\n")
        outputs.append(opts["out"])
    return [opts["spec"]], outputs


def _run_gen_data(opts: dict):
    spec = load_spec_file(opts["spec"])
    box = _parse_box(opts["box"])
    dataset = generate_training_set(
        spec,
        box,
        L=opts["L"],
        M=opts["M"],
        sampler_config=_sampler_config(opts),
        master_seed=opts["seed"],
        max_parallelism=opts.get("parallelism", 1),
        timestamp=opts["timestamp"],
    )
    dataset.save(opts["out"])
    meta_path = os.path.splitext(opts["out"])[0] + ".meta.json"
    return [opts["spec"]], [opts["out"], meta_path]


def _run_train(opts: dict):
    dataset = TrainingDataset.load(opts["data"])
    arch = ArchConfig(tuple(opts.get("hidden", [128, 64])), opts.get("dropout", 0.2))
    cfg = TrainConfig(
        epochs=opts.get("epochs", 200),
        validation_fraction=opts.get("val_frac", 0.2),
        batch_size=opts.get("batch_size", 64),
        learning_rate=opts.get("lr", 1e-3),
        seed=opts["seed"],
    )
    model = train(dataset, arch, cfg)
    model.save(opts["out"])
    losses_path = os.path.splitext(opts["out"])[0] + ".losses.csv"
    lines = ["epoch,train_loss,val_loss"]
    for e, (tl, vl) in enumerate(
        zip(model.history["train_loss"], model.history["val_loss"]), start=1
    ):
        lines.append(f"{e},{repr(float(tl))},{repr(float(vl))}")
    atomic_write_text(losses_path, "\n".join(lines) + "\n")
    return [opts["data"]], [opts["out"], losses_path]


def _model_spec(model: SurrogateModel) -> ModelSpec:
    spec_data = model.meta.get("spec")
    if spec_data is None:
        raise SpecError(
            "model file has no embedded model description; pass raw --t-obs"
        )
    return ModelSpec.from_dict(spec_data)


def _run_estimate(opts: dict):
    model = SurrogateModel.load(opts["model"])
    inputs = [opts["model"]]
    if opts.get("t_obs") is not None:
        t_obs = np.asarray(opts["t_obs"], dtype=float)
    else:
        g = _load_graph(opts["graph"])
        inputs.append(opts["graph"])
        t_obs = compute_stats(_model_spec(model), g)
    if opts.get("box"):
        box = _parse_box(opts["box"])
    elif model.meta.get("box"):
        box = PriorBox.from_dict(model.meta["box"])
    else:
        raise SpecError("no search box: pass --box or use a model that records one")
    result = invert(
        model,
        t_obs,
        box,
        n_starts=opts.get("starts", 32),
        seed=opts["seed"],
        raw_objective=opts.get("raw_objective", False),
    )
    report = result.to_dict()
    report["t_obs"] = t_obs.tolist()
    report["box"] = box.to_dict()
    report["model_file"] = opts["model"]
    atomic_write_text(opts["out"], json.dumps(report, indent=2) + "\n")
    return inputs, [opts["out"]]


def _run_mple(opts: dict):
    spec = load_spec_file(opts["spec"])
    g = _load_graph(opts["graph"])
    result = mple(spec, g)
    report = result.to_dict()
    report["terms"] = spec.term_labels()
    atomic_write_text(opts["out"], json.dumps(report, indent=2) + "\n")
    return [opts["spec"], opts["graph"]], [opts["out"]]


def _run_mcmc_mle(opts: dict):
    spec = load_spec_file(opts["spec"])
    g = _load_graph(opts["graph"])
    config = RobbinsMonroConfig(
        R=opts.get("R", 100),
        gamma0=opts.get("gamma0", 0.5),
        a=opts.get("a", 0.8),
        max_iterations=opts.get("max_iter", 500),
        sampler=_sampler_config(opts),
    )
    theta0 = opts.get("theta0")
    result = mcmc_mle(spec, g, theta0=theta0, config=config, seed=opts["seed"])
    report = result.to_dict()
    report["terms"] = spec.term_labels()
    report["trajectory"] = result.trajectory.tolist()
    atomic_write_text(opts["out"], json.dumps(report, indent=2) + "\n")
    return [opts["spec"], opts["graph"]], [opts["out"]]


def _run_gof(opts: dict):
    spec = load_spec_file(opts["spec"])
    g = _load_graph(opts["graph"])
    extra = _parse_extra_terms(opts.get("extra_terms", ""))
    report = goodness_of_fit(
        spec,
        opts["theta"],
        g,
        extra_terms=extra,
        sampler_config=_sampler_config(opts),
        M=opts["M"],
        seed=opts["seed"],
    )
    atomic_write_text(opts["out"], report.to_csv())
    return [opts["spec"], opts["graph"]], [opts["out"]]


def _run_scan(opts: dict):
    model = SurrogateModel.load(opts["model"])
    box = _parse_box(opts["box"]) if opts.get("box") else None
    thresholds = tuple(float(v) for v in opts.get("thresholds", "0.02,0.98").split(","))
    if len(thresholds) != 2:
        raise ValueError("--thresholds expects lo,hi")
    result = degeneracy_scan(
        model, box, grid_points_per_dim=opts.get("grid", 21), thresholds=thresholds
    )
    atomic_write_text(opts["out"], result.to_csv())
    return [opts["model"]], [opts["out"]]


def _closed_form_means(spec: ModelSpec, thetas: np.ndarray):
    """Analytic E[t] for the two specs with closed forms, else None."""
    slots = max_edges(spec.n, spec.directed)
    if spec.terms == (Edges(),):
        return slots / (1.0 + np.exp(-thetas[:, 0]))[:, None]
    if spec.directed and spec.d == 2 and set(map(type, spec.terms)) == {Edges, Mutual}:
        e_idx = 0 if isinstance(spec.terms[0], Edges) else 1
        m_idx = 1 - e_idx
        te, tm = thetas[:, e_idx], thetas[:, m_idx]
        z = 1.0 + 2.0 * np.exp(te) + np.exp(2.0 * te + tm)
        pairs = spec.n * (spec.n - 1) // 2
        out = np.empty((thetas.shape[0], 2))
        out[:, e_idx] = pairs * (2.0 * np.exp(te) + 2.0 * np.exp(2.0 * te + tm)) / z
        out[:, m_idx] = pairs * np.exp(2.0 * te + tm) / z
        return out
    return None


def _run_figures(opts: dict):
    model = SurrogateModel.load(opts["model"])
    dataset = TrainingDataset.load(opts["data"])
    if model.dataset_fingerprint != dataset.fingerprint():
        raise SpecError(
            "dataset does not match the model's recorded training-data fingerprint"
        )
    out_dir = opts["out_dir"]
    os.makedirs(out_dir, exist_ok=True)
    spec = _model_spec(model)
    train_meta = model.meta.get("train", {})
    cfg = TrainConfig(
        epochs=int(train_meta.get("epochs", 200)),
        validation_fraction=float(train_meta.get("validation_fraction", 0.2)),
        batch_size=int(train_meta.get("batch_size", 64)),
        learning_rate=float(train_meta.get("learning_rate", 1e-3)),
        seed=int(train_meta.get("seed", 0)),
    )
    from .surrogate import validation_indices

    val_idx = validation_indices(dataset.L, cfg)
    mask = np.zeros(dataset.L, dtype=bool)
    mask[val_idx] = True

    p, d = dataset.p, dataset.d
    outputs = []

    # Held-out scatter: observed vs predicted per statistic.
    preds = model.predict(dataset.thetas[mask])
    header = (
        [f"theta_{k}" for k in range(p)]
        + [f"obs_stat_{k}" for k in range(d)]
        + [f"pred_stat_{k}" for k in range(d)]
    )
    lines = [",".join(header)]
    th, ob = dataset.thetas[mask], dataset.stats[mask]
    for row in range(th.shape[0]):
        vals = [repr(float(v)) for v in th[row]]
        vals += [repr(float(v)) for v in ob[row]]
        vals += [repr(float(v)) for v in preds[row]]
        lines.append(",".join(vals))
    path = os.path.join(out_dir, "pred_vs_test.csv")
    atomic_write_text(path, "\n".join(lines) + "\n")
    outputs.append(path)

    # Training rows (theta, simulated mean) for the curve plot.
    lines = [",".join([f"theta_{k}" for k in range(p)] + [f"stat_{k}" for k in range(d)])]
    th, ob = dataset.thetas[~mask], dataset.stats[~mask]
    for row in range(th.shape[0]):
        vals = [repr(float(v)) for v in th[row]] + [repr(float(v)) for v in ob[row]]
        lines.append(",".join(vals))
    path = os.path.join(out_dir, "train_points.csv")
    atomic_write_text(path, "\n".join(lines) + "\n")
    outputs.append(path)

    # Predicted curve over a grid, with the theoretical value when known.
    box = PriorBox.from_dict(model.meta["box"])
    per_dim = 101 if p == 1 else (21 if p == 2 else 7)
    axes = [np.linspace(box.lo[k], box.hi[k], per_dim) for k in range(p)]
    mesh = np.meshgrid(*axes, indexing="ij")
    grid = np.stack([m.ravel() for m in mesh], axis=1)
    grid_pred = model.predict(grid)
    theo = _closed_form_means(spec, grid)
    header = [f"theta_{k}" for k in range(p)] + [f"pred_stat_{k}" for k in range(d)]
    if theo is not None:
        header += [f"theoretical_stat_{k}" for k in range(d)]
    lines = [",".join(header)]
    for row in range(grid.shape[0]):
        vals = [repr(float(v)) for v in grid[row]]
        vals += [repr(float(v)) for v in grid_pred[row]]
        if theo is not None:
            vals += [repr(float(v)) for v in theo[row]]
        lines.append(",".join(vals))
    path = os.path.join(out_dir, "curve.csv")
    atomic_write_text(path, "\n".join(lines) + "\n")
    outputs.append(path)

    return [opts["model"], opts["data"]], outputs


_RUNNERS = {
    "simulate": _run_simulate,
    "oracle": _run_oracle,
    "gen-data": _run_gen_data,
    "train": _run_train,
    "estimate": _run_estimate,
    "mple": _run_mple,
    "mcmc-mle": _run_mcmc_mle,
    "gof": _run_gof,
    "scan": _run_scan,
    "figures": _run_figures,
}


def _manifest_path(subcommand: str, opts: dict, outputs: list) -> str | None:
    if subcommand == "figures":
        return os.path.join(opts["out_dir"], "manifest.json")
    if outputs:
        return outputs[0] + ".manifest.json"
    return None


def _execute(subcommand: str, opts: dict) -> int:
    started = datetime.now(timezone.utc).isoformat(timespec="seconds")
    t0 = time.perf_counter()
    inputs, outputs = _RUNNERS[subcommand](opts)
    duration = time.perf_counter() - t0
    manifest = {
        "format": "nnergm-manifest-v1",
        "subcommand": subcommand,
        "version": __version__,
        "options": opts,
        "inputs": inputs,
        "outputs": outputs,
        "started_at": started,
        "duration_seconds": round(duration, 6),
    }
    path = _manifest_path(subcommand, opts, outputs)
    if path is not None:
        atomic_write_text(path, json.dumps(manifest, indent=2) + "\n")
    return 0


_OUTPUT_KEYS = {"figures": ("out_dir",)}


def _run_replay(args) -> int:
    with open(args.manifest, "r", encoding="utf-8") as fh:
        manifest = json.load(fh)
    subcommand = manifest["subcommand"]
    if subcommand not in _RUNNERS:
        raise ValueError(f"manifest names unknown subcommand {subcommand!r}")
    opts = dict(manifest["options"])
    if args.out_dir:
        os.makedirs(args.out_dir, exist_ok=True)
        for key in _OUTPUT_KEYS.get(subcommand, ("out",)):
            if opts.get(key):
                opts[key] = (
                    args.out_dir
                    if key == "out_dir"
                    else os.path.join(args.out_dir, os.path.basename(opts[key]))
                )
    return _execute(subcommand, opts)


# ------------------------------------------------------------ arg wiring


def _add_sampler_flags(sub):
    sub.add_argument("--burn-in", type=int, default=50, dest="burn_in",
                     help="burn-in sweeps before recording (default 50)")
    sub.add_argument("--thin", type=int, default=5,
                     help="sweeps between recorded samples (default 5)")
    sub.add_argument("--init", default="empty",
                     help="chain start: empty | random:<p> | file:<path>")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="nnergm",
                     description="simulate, fit, and invert random-graph models")
    parser.add_argument("--version", action="version", version=__version__)
    subs = parser.add_subparsers(dest="subcommand", required=True)

    sp = subs.add_parser("simulate", help="sample statistics from one chain")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--theta", required=True)
    sp.add_argument("--M", type=int, required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out", required=True)
    _add_sampler_flags(sp)

    sp = subs.add_parser("oracle", help="exact mean statistics by enumeration")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--theta", required=True)
    sp.add_argument("--out")

    sp = subs.add_parser("gen-data", help="simulate a surrogate training set")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--box", required=True, help="lo:hi[,lo:hi...] per coefficient")
    sp.add_argument("--L", type=int, required=True, help="number of design points")
    sp.add_argument("--M", type=int, required=True, help="samples averaged per design")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--parallelism", type=int, default=1)
    sp.add_argument("--out", required=True)
    _add_sampler_flags(sp)

    sp = subs.add_parser("train", help="fit the surrogate network")
    sp.add_argument("--data", required=True)
    sp.add_argument("--out", required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--epochs", type=int, default=200)
    sp.add_argument("--val-frac", type=float, default=0.2, dest="val_frac")
    sp.add_argument("--batch-size", type=int, default=64, dest="batch_size")
    sp.add_argument("--lr", type=float, default=1e-3)
    sp.add_argument("--hidden", default="128,64")
    sp.add_argument("--dropout", type=float, default=0.2)

    sp = subs.add_parser("estimate", help="invert the surrogate at observed stats")
    sp.add_argument("--model", required=True)
    group = sp.add_mutually_exclusive_group(required=True)
    group.add_argument("--t-obs", dest="t_obs")
    group.add_argument("--graph")
    sp.add_argument("--box")
    sp.add_argument("--starts", type=int, default=32)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--raw-objective", action="store_true", dest="raw_objective")
    sp.add_argument("--out", required=True)

    sp = subs.add_parser("mple", help="maximum pseudolikelihood fit")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--out", required=True)

    sp = subs.add_parser("mcmc-mle", help="Robbins-Monro stochastic MLE")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--theta0")
    sp.add_argument("--R", type=int, default=100)
    sp.add_argument("--gamma0", type=float, default=0.5)
    sp.add_argument("--a", type=float, default=0.8)
    sp.add_argument("--max-iter", type=int, default=500, dest="max_iter")
    sp.add_argument("--out", required=True)
    _add_sampler_flags(sp)

    sp = subs.add_parser("gof", help="observed-vs-simulated z-scores")
    sp.add_argument("--spec", required=True)
    sp.add_argument("--graph", required=True)
    sp.add_argument("--theta", required=True)
    sp.add_argument("--extra-terms", default="", dest="extra_terms",
                    help="e.g. triangles,gwesp:0.5,node_match:grade")
    sp.add_argument("--M", type=int, default=100)
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--out", required=True)
    _add_sampler_flags(sp)

    sp = subs.add_parser("scan", help="degeneracy map over the box")
    sp.add_argument("--model", required=True)
    sp.add_argument("--box")
    sp.add_argument("--grid", type=int, default=21)
    sp.add_argument("--thresholds", default="0.02,0.98")
    sp.add_argument("--out", required=True)

    sp = subs.add_parser("figures", help="CSV data behind the standard plots")
    sp.add_argument("--model", required=True)
    sp.add_argument("--data", required=True)
    sp.add_argument("--out-dir", required=True, dest="out_dir")

    sp = subs.add_parser("replay", help="re-run a recorded manifest")
    sp.add_argument("manifest")
    sp.add_argument("--out-dir", dest="out_dir",
                    help="redirect outputs into this directory")

    return parser


def _collect_opts(args) -> dict:
    """Turn parsed args into the JSON-friendly options dict for the manifest."""
    sub = args.subcommand
    opts = {}
    skip = {"subcommand"}
    for key, value in vars(args).items():
        if key in skip or value is None:
            continue
        opts[key] = value
    if "theta" in opts:
        opts["theta"] = _parse_theta(opts["theta"])
    if "t_obs" in opts:
        opts["t_obs"] = _parse_theta(opts["t_obs"])
    if "theta0" in opts:
        opts["theta0"] = _parse_theta(opts["theta0"])
    if "hidden" in opts:
        opts["hidden"] = [int(v) for v in str(opts["hidden"]).split(",")]
    if sub == "gen-data":
        opts["timestamp"] = datetime.now(timezone.utc).isoformat(timespec="seconds")
    return opts


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if args.subcommand == "replay":
            return _run_replay(args)
        # Validate eagerly so bad values are usage errors, not tracebacks.
        opts = _collect_opts(args)
        return _execute(args.subcommand, opts)
    except _NUMERICAL_ERRORS as exc:
        print(f"nnergm {args.subcommand}: numerical failure: {exc}", file=sys.stderr)
        return 2
    except _USAGE_ERRORS as exc:
        print(f"nnergm {args.subcommand}: error: {exc}", file=sys.stderr)
        return 1


def entry_point() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry_point()
