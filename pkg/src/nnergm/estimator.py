"""Surrogate inversion, simulation-based standard errors, GoF, degeneracy maps."""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CollinearityError, EstimationError, SpecError
from .graph import Graph, max_edges
from .sampler import SamplerConfig, simulate_graphs, simulate_stats
from .statistics import Edges, ModelSpec, compute_stats
from .surrogate import PriorBox, SurrogateModel

__all__ = [
    "EstimateResult",
    "GofRow",
    "GofReport",
    "DegeneracyMap",
    "invert",
    "standard_errors",
    "goodness_of_fit",
    "degeneracy_scan",
]

_BOUNDARY_ATOL = 1e-6
_NEAR_TIE_OBJ = 1e-4
_NEAR_TIE_DIST = 0.1


@dataclass
class EstimateResult:
    """Outcome of an estimation run (surrogate inversion or MCMC-MLE)."""

    theta_hat: np.ndarray
    objective: float
    starts: list
    boundary_flag: bool
    method: str
    standard_errors: Optional[np.ndarray] = None
    converged: bool = True
    iterations: int = 0
    near_tie: bool = False
    message: str = ""
    trajectory: Optional[np.ndarray] = None

    def to_dict(self) -> dict:
        return {
            "theta_hat": np.asarray(self.theta_hat).tolist(),
            "objective": self.objective,
            "starts": [
                {
                    "start": np.asarray(s).tolist(),
                    "solution": np.asarray(t).tolist(),
                    "objective": float(o),
                }
                for s, t, o in self.starts
            ],
            "boundary_flag": self.boundary_flag,
            "method": self.method,
            "standard_errors": None
            if self.standard_errors is None
            else np.asarray(self.standard_errors).tolist(),
            "converged": self.converged,
            "iterations": self.iterations,
            "near_tie": self.near_tie,
            "message": self.message,
        }


def _objective_fns(model: SurrogateModel, t_obs: np.ndarray, scale: np.ndarray):
    def value(theta):
        r = (model.predict(theta) - t_obs) / scale
        return float(r @ r)

    def value_grad(theta):
        r = (model.predict(theta) - t_obs) / scale
        jac = model.input_jacobian(theta) / scale[:, None]
        return float(r @ r), 2.0 * jac.T @ r, r, jac

    return value, value_grad


def _descend(model, t_obs, scale, lo, hi, theta0, max_iter=500):
    """Projected gradient descent with backtracking, then Gauss-Newton polish."""
    value, value_grad = _objective_fns(model, t_obs, scale)
    theta = np.clip(theta0, lo, hi)
    f = value(theta)
    step = 1.0
    for _ in range(max_iter):
        _, grad, _, _ = value_grad(theta)
        accepted = False
        t = step
        for _ in range(60):
            cand = np.clip(theta - t * grad, lo, hi)
            move = theta - cand
            if not move.any():
                break
            fc = value(cand)
            if fc <= f - 1e-4 * float(grad @ move):
                accepted = True
                break
            t *= 0.5
        if not accepted:
            break
        step = min(t * 2.0, 1e6)
        done = np.max(np.abs(cand - theta)) < 1e-10
        theta, f = cand, fc
        if done:
            break
    # Gauss-Newton polish sharpens interior solutions to solver precision.
    for _ in range(25):
        _, _, r, jac = value_grad(theta)
        delta, *_ = np.linalg.lstsq(jac, -r, rcond=None)
        improved = False
        t = 1.0
        for _ in range(20):
            cand = np.clip(theta + t * delta, lo, hi)
            fc = value(cand)
            if fc < f:
                theta, f = cand, fc
                improved = True
                break
            t *= 0.5
        if not improved or f < 1e-28:
            break
    return theta, f


def invert(
    model: SurrogateModel,
    t_obs,
    box: PriorBox,
    n_starts: int = 32,
    seed: int = 0,
    raw_objective: bool = False,
) -> EstimateResult:
    """Estimate theta by minimizing ||f(theta) - t_obs||^2 over the box.

    The objective is computed in output-standardized coordinates unless
    ``raw_objective`` is set. ``n_starts`` seeded local searches guard
    against surrogate nonconvexity; near-ties far apart in theta are
    flagged as an identification warning.
    """
    t_obs = np.asarray(t_obs, dtype=np.float64)
    if t_obs.shape != (model.d_out,):
        raise SpecError(
            f"observed statistics have shape {t_obs.shape}, model predicts "
            f"{model.d_out} statistics"
        )
    if box.d != model.d_in:
        raise SpecError(f"box dimension {box.d} != model input dimension {model.d_in}")
    if n_starts < 1:
        raise ValueError("n_starts must be >= 1")
    scale = np.ones(model.d_out) if raw_objective else model.out_scale

    rng = np.random.Generator(np.random.PCG64(seed))
    start_points = box.sample(rng, n_starts)
    lo, hi = box.lo, box.hi

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        results = []
        for s in range(n_starts):
            theta, f = _descend(model, t_obs, scale, lo, hi, start_points[s])
            results.append((start_points[s].copy(), theta, f))

    best_idx = min(range(n_starts), key=lambda s: results[s][2])
    theta_hat = results[best_idx][1]
    best_obj = results[best_idx][2]

    boundary = bool(
        np.any(np.abs(theta_hat - lo) <= _BOUNDARY_ATOL)
        or np.any(np.abs(theta_hat - hi) <= _BOUNDARY_ATOL)
    )
    near_tie = False
    for s, (_, theta_s, f_s) in enumerate(results):
        if s == best_idx:
            continue
        if f_s - best_obj <= _NEAR_TIE_OBJ and np.max(np.abs(theta_s - theta_hat)) > _NEAR_TIE_DIST:
            near_tie = True
            break
    message = ""
    if near_tie:
        message = (
            "multiple near-optimal solutions far apart in parameter space; "
            "the surrogate may not be invertible at these statistics"
        )
    return EstimateResult(
        theta_hat=theta_hat,
        objective=best_obj,
        starts=results,
        boundary_flag=boundary,
        method="surrogate-inversion",
        near_tie=near_tie,
        message=message,
        iterations=n_starts,
    )


def standard_errors(
    spec: ModelSpec,
    theta_hat,
    sampler_config: SamplerConfig | None = None,
    M: int = 1000,
    seed: int = 0,
) -> np.ndarray:
    """Simulation-based standard errors sqrt(diag(C^-1)).

    C is the sample covariance of M simulated statistic vectors at
    theta_hat — the Fisher information of the exponential family — so its
    inverse estimates the asymptotic covariance of the MLE.
    """
    if M < 100:
        raise ValueError("M must be >= 100 for a usable covariance estimate")
    draws = simulate_stats(spec, theta_hat, M, seed, sampler_config)
    cov = np.atleast_2d(np.cov(draws.T, ddof=1))

    labels = spec.term_labels()
    sd = np.sqrt(np.diag(cov))
    flat = [labels[k] for k in range(spec.d) if sd[k] < 1e-12]
    if flat:
        raise CollinearityError(
            f"statistics {flat} show zero variance at theta_hat; "
            "covariance is singular"
        )
    corr = cov / np.outer(sd, sd)
    for a in range(spec.d):
        for b in range(a + 1, spec.d):
            if abs(corr[a, b]) > 1.0 - 1e-10:
                raise CollinearityError(
                    f"statistics {labels[a]!r} and {labels[b]!r} are collinear "
                    f"(|corr| = {abs(corr[a, b]):.6f}); covariance is singular"
                )
    cond = np.linalg.cond(cov)
    if cond > 1e10:
        warnings.warn(
            f"statistic covariance is ill-conditioned (cond = {cond:.3e}); "
            "standard errors may be unstable",
            RuntimeWarning,
            stacklevel=2,
        )
    try:
        inv = np.linalg.inv(cov)
    except np.linalg.LinAlgError as exc:
        raise CollinearityError(f"singular statistic covariance: {exc}") from exc
    return np.sqrt(np.diag(inv))


@dataclass
class GofRow:
    label: str
    observed: float
    sim_mean: float
    sim_sd: float
    z: float
    degenerate: bool
    extra: bool


@dataclass
class GofReport:
    rows: list
    M: int
    seed: int
    theta_hat: np.ndarray

    def to_dict(self) -> dict:
        return {
            "theta_hat": np.asarray(self.theta_hat).tolist(),
            "M": self.M,
            "seed": self.seed,
            "rows": [vars(r).copy() for r in self.rows],
        }

    def to_csv(self) -> str:
        lines = ["statistic,observed,sim_mean,sim_sd,z,degenerate,extra_term"]
        for r in self.rows:
            z_txt = "" if np.isnan(r.z) else repr(float(r.z))
            sd_txt = "" if np.isnan(r.sim_sd) else repr(float(r.sim_sd))
            lines.append(
                f"{r.label},{repr(float(r.observed))},{repr(float(r.sim_mean))},"
                f"{sd_txt},{z_txt},{int(r.degenerate)},{int(r.extra)}"
            )
        return "\n".join(lines) + "\n"


def goodness_of_fit(
    spec: ModelSpec,
    theta_hat,
    g_obs: Graph,
    extra_terms=(),
    sampler_config: SamplerConfig | None = None,
    M: int = 100,
    seed: int = 0,
) -> GofReport:
    """Observed-vs-simulated z-scores at theta_hat.

    Extra terms are evaluated on the retained simulated graphs, so a
    misspecified fit shows up as a large |z| on statistics the model never
    matched. A zero simulated standard deviation marks the row degenerate.
    """
    spec.validate_graph(g_obs)
    theta_hat = spec.validate_theta(theta_hat)
    extended = ModelSpec(
        spec.n,
        spec.directed,
        tuple(spec.terms) + tuple(extra_terms),
        node_attributes=spec.node_attributes,
        dyad_covariates=spec.dyad_covariates,
    )
    graphs = simulate_graphs(spec, theta_hat, M, seed, sampler_config)
    sims = np.array([compute_stats(extended, g) for g in graphs])
    observed = compute_stats(extended, g_obs)
    mean = sims.mean(axis=0)
    if M > 1:
        sd = sims.std(axis=0, ddof=1)
    else:
        sd = np.zeros(extended.d)

    labels = extended.term_labels()
    rows = []
    for k in range(extended.d):
        degenerate = sd[k] <= 0.0
        z = np.nan if degenerate else (observed[k] - mean[k]) / sd[k]
        rows.append(
            GofRow(
                label=labels[k],
                observed=float(observed[k]),
                sim_mean=float(mean[k]),
                sim_sd=float(sd[k]) if not degenerate or M > 1 else np.nan,
                z=z,
                degenerate=bool(degenerate),
                extra=k >= spec.d,
            )
        )
    return GofReport(rows=rows, M=M, seed=seed, theta_hat=theta_hat)


@dataclass
class DegeneracyMap:
    thetas: np.ndarray
    density: np.ndarray
    flags: list
    thresholds: tuple

    def to_csv(self) -> str:
        p = self.thetas.shape[1]
        header = [f"theta_{k}" for k in range(p)] + ["density", "flag"]
        lines = [",".join(header)]
        for row in range(self.thetas.shape[0]):
            vals = [repr(float(v)) for v in self.thetas[row]]
            vals.append(repr(float(self.density[row])))
            vals.append(self.flags[row])
            lines.append(",".join(vals))
        return "\n".join(lines) + "\n"

    def flag_at(self, theta, atol: float = 1e-9) -> str:
        t = np.asarray(theta, dtype=float)
        hits = np.where(np.all(np.abs(self.thetas - t) <= atol, axis=1))[0]
        if hits.size == 0:
            raise KeyError(f"{t.tolist()} is not a grid point")
        return self.flags[int(hits[0])]


def degeneracy_scan(
    model: SurrogateModel,
    box: PriorBox | None = None,
    grid_points_per_dim: int = 21,
    thresholds: tuple = (0.02, 0.98),
) -> DegeneracyMap:
    """Flag box regions whose predicted density is near 0 or 1.

    Density is the predicted edge count divided by the number of possible
    edges, clipped to [0, 1]. Requires the surrogate's model description
    to include an edge-count term.
    """
    lo_thr, hi_thr = float(thresholds[0]), float(thresholds[1])
    if not 0.0 <= lo_thr < hi_thr <= 1.0 and not (lo_thr == 0.0 and hi_thr == 1.0):
        raise ValueError("thresholds must satisfy 0 <= lo < hi <= 1")
    if box is None:
        if "box" not in model.meta or model.meta["box"] is None:
            raise ValueError("no box given and none recorded in the model file")
        box = PriorBox.from_dict(model.meta["box"])
    spec_data = model.meta.get("spec")
    if spec_data is None:
        raise EstimationError("model file carries no model description; cannot scan")
    spec = ModelSpec.from_dict(spec_data)
    edge_idx = None
    for k, term in enumerate(spec.terms):
        if isinstance(term, Edges):
            edge_idx = k
            break
    if edge_idx is None:
        raise EstimationError(
            "model has no edge-count term; density-based degeneracy scan undefined"
        )
    if grid_points_per_dim < 2:
        raise ValueError("grid_points_per_dim must be >= 2")
    if grid_points_per_dim ** box.d > 1_000_000:
        raise ValueError("grid exceeds the 1e6-point cap")

    axes = [
        np.linspace(box.lo[k], box.hi[k], grid_points_per_dim) for k in range(box.d)
    ]
    mesh = np.meshgrid(*axes, indexing="ij")
    points = np.stack([m.ravel() for m in mesh], axis=1)
    preds = model.predict(points)
    slots = max_edges(spec.n, spec.directed)
    density = np.clip(preds[:, edge_idx] / slots, 0.0, 1.0)
    flags = []
    for v in density:
        if v < lo_thr:
            flags.append("near-empty")
        elif v > hi_thr:
            flags.append("near-complete")
        else:
            flags.append("interior")
    return DegeneracyMap(points, density, flags, (lo_thr, hi_thr))
