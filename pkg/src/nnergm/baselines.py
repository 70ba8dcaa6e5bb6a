"""Classical estimators: maximum pseudolikelihood and stochastic-approximation MLE."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DegeneracyError, EstimationError
from .graph import Graph, dyad_pairs
from .sampler import SamplerConfig, simulate_stats
from .seeds import mix
from .statistics import ModelSpec, change_stats, compute_stats

__all__ = ["MpleResult", "RobbinsMonroConfig", "mple", "mcmc_mle"]

_GRAD_TOL = 1e-8
_MAX_NEWTON = 100


@dataclass
class MpleResult:
    theta_hat: np.ndarray
    naive_se: np.ndarray
    iterations: int
    converged: bool
    message: str = ""

    def to_dict(self) -> dict:
        return {
            "theta_hat": self.theta_hat.tolist(),
            "naive_se": self.naive_se.tolist(),
            "iterations": self.iterations,
            "converged": self.converged,
            "message": self.message,
        }


def _dyad_design(spec: ModelSpec, g: Graph):
    pairs = dyad_pairs(spec.n, spec.directed)
    X = np.empty((len(pairs), spec.d))
    y = np.empty(len(pairs))
    for row, (i, j) in enumerate(pairs):
        X[row] = change_stats(spec, g, i, j)
        y[row] = 1.0 if g.has_edge(i, j) else 0.0
    return X, y


def _sigmoid(eta):
    return 1.0 / (1.0 + np.exp(-np.clip(eta, -500.0, 500.0)))


def _bernoulli_loglik(eta, y):
    return float(np.sum(y * eta - np.logaddexp(0.0, eta)))


def mple(spec: ModelSpec, g_obs: Graph) -> MpleResult:
    """Maximum pseudolikelihood: logistic regression of dyad states on change stats.

    Each orderable dyad contributes one Bernoulli observation whose
    covariates are its change statistics. The concave pseudo-log-likelihood
    is maximized by damped Newton iterations; the naive standard errors are
    the usual logistic-regression ones and ignore dyad dependence.
    """
    spec.validate_graph(g_obs)
    X, y = _dyad_design(spec, g_obs)
    total = y.sum()
    if total == 0:
        raise EstimationError("observed graph empty: MPLE undefined")
    if total == len(y):
        raise EstimationError("observed graph complete: MPLE undefined")

    d = spec.d
    theta = np.zeros(d)
    ll = _bernoulli_loglik(X @ theta, y)
    nan_se = np.full(d, np.nan)

    def newton_step(theta_cur):
        eta = X @ theta_cur
        p = _sigmoid(eta)
        grad = X.T @ (y - p)
        w = np.maximum(p * (1.0 - p), 1e-12)
        hess = X.T @ (X * w[:, None])
        return grad, hess

    hit_tol = False
    it = 0
    for it in range(1, _MAX_NEWTON + 1):
        grad, hess = newton_step(theta)
        if np.max(np.abs(grad)) <= _GRAD_TOL:
            hit_tol = True
            # One undamped polish step: quadratic convergence pushes the
            # closed-form cases well past the 1e-10 mark.
            try:
                theta = theta + np.linalg.solve(hess, grad)
            except np.linalg.LinAlgError:
                pass
            break
        try:
            direction = np.linalg.solve(hess, grad)
        except np.linalg.LinAlgError:
            return MpleResult(theta, nan_se, it, False,
                              "singular Hessian (collinear change statistics?)")
        step = 1.0
        while step > 1e-10:
            cand = theta + step * direction
            cand_ll = _bernoulli_loglik(X @ cand, y)
            if cand_ll >= ll - 1e-10 * (1.0 + abs(ll)):
                break
            step *= 0.5
        else:
            return MpleResult(theta, nan_se, it, False,
                              "line search stalled (separation?)")
        assert cand_ll >= ll - 1e-8 * (1.0 + abs(ll)), "pseudo-log-likelihood decreased"
        theta, ll = cand, cand_ll

    _, hess = newton_step(theta)
    try:
        se = np.sqrt(np.diag(np.linalg.inv(hess)))
    except np.linalg.LinAlgError:
        se = nan_se
    if hit_tol:
        return MpleResult(theta, se, it, True)
    return MpleResult(theta, se, _MAX_NEWTON, False,
                      "gradient tolerance not reached (separation?)")


@dataclass
class RobbinsMonroConfig:
    """Step-size schedule gamma0/(k+1)**a with a diagonal preconditioner.

    After the stochastic phase settles, `refine_steps` Fisher-scoring
    updates with `refine_factor * R` simulations sharpen theta_hat to the
    Monte Carlo noise floor (the moment-equation Jacobian of an
    exponential family is the statistic covariance).
    """

    R: int = 100
    gamma0: float = 0.5
    a: float = 0.8
    max_iterations: int = 500
    tolerance: float = 1e-3
    consecutive: int = 5
    refine_steps: int = 2
    refine_factor: int = 20
    sampler: SamplerConfig = field(default_factory=SamplerConfig)

    def __post_init__(self):
        if self.R < 1:
            raise ValueError("R must be >= 1")
        if not 0.5 < self.a <= 1.0:
            raise ValueError("step exponent a must satisfy 0.5 < a <= 1")
        if self.gamma0 <= 0:
            raise ValueError("gamma0 must be positive")
        if self.refine_steps < 0 or self.refine_factor < 1:
            raise ValueError("refine_steps must be >= 0 and refine_factor >= 1")


def mcmc_mle(spec: ModelSpec, g_obs: Graph, theta0=None, config=None, seed=0):
    """Method-of-moments MLE by Robbins-Monro stochastic approximation.

    Iterates theta <- theta + gamma_k * D * (t_obs - tbar_R(theta)), where
    tbar_R is the mean of R simulated statistic vectors and D is a diagonal
    preconditioner from the statistic variances at theta0. Convergence is
    declared after `consecutive` iterations with max parameter change below
    `tolerance`; the returned result carries a final score check comparing
    t_obs against simulated means at theta_hat.
    """
    from .estimator import EstimateResult

    if config is None:
        config = RobbinsMonroConfig()
    spec.validate_graph(g_obs)
    t_obs = compute_stats(spec, g_obs)
    if theta0 is None:
        theta0 = mple(spec, g_obs).theta_hat
    theta = spec.validate_theta(theta0).copy()

    trajectory = [theta.copy()]
    precond = None
    pinned_streak = 0
    tol_streak = 0
    converged_by_tol = False
    iterations = 0

    for k in range(config.max_iterations):
        draws = simulate_stats(spec, theta, config.R, mix(seed, k), config.sampler)
        if config.R > 1 and np.all(draws == draws[0]):
            pinned_streak += 1
            if pinned_streak >= 3:
                raise DegeneracyError(
                    "simulated statistics pinned at a degeneracy boundary "
                    f"for 3 consecutive iterations near theta={theta.tolist()}"
                )
        else:
            pinned_streak = 0
        if precond is None:
            var0 = draws.var(axis=0, ddof=1) if config.R > 1 else np.ones(spec.d)
            precond = 1.0 / np.maximum(var0, 1e-8)
        tbar = draws.mean(axis=0)
        gamma = config.gamma0 / (k + 1) ** config.a
        step = gamma * precond * (t_obs - tbar)
        theta = theta + step
        trajectory.append(theta.copy())
        iterations = k + 1
        if np.max(np.abs(step)) < config.tolerance:
            tol_streak += 1
            if tol_streak >= config.consecutive and k + 1 >= 10:
                converged_by_tol = True
                break
        else:
            tol_streak = 0

    # Fisher-scoring polish: the Robbins-Monro phase leaves a slowly decaying
    # O(gamma_k) offset; a couple of covariance-preconditioned Newton steps
    # with many more draws push theta_hat down to simulation noise.
    R_big = config.refine_factor * config.R
    for r in range(config.refine_steps):
        draws = simulate_stats(spec, theta, R_big,
                               mix(seed, config.max_iterations + 2 + r),
                               config.sampler)
        cov = np.atleast_2d(np.cov(draws.T, ddof=1))
        if np.any(np.diag(cov) <= 1e-12):
            break  # pinned statistic; leave it to the score check below
        try:
            step = np.linalg.solve(cov, t_obs - draws.mean(axis=0))
        except np.linalg.LinAlgError:
            break
        step = np.clip(step, -1.0, 1.0)
        theta = theta + step
        trajectory.append(theta.copy())

    check_R = R_big if config.refine_steps > 0 else config.R
    final = simulate_stats(spec, theta, check_R,
                           mix(seed, config.max_iterations + 1), config.sampler)
    mean_f = final.mean(axis=0)
    if check_R > 1:
        se_f = final.std(axis=0, ddof=1) / np.sqrt(check_R)
    else:
        se_f = np.zeros(spec.d)
    gap = np.abs(t_obs - mean_f)
    score_ok = bool(np.all(gap <= 4.0 * np.maximum(se_f, 1e-8)))

    message = ""
    if not converged_by_tol:
        message = "parameter-change tolerance not reached within max_iterations"
    if not score_ok:
        message = (message + "; " if message else "") + (
            "score check failed: simulated means at theta_hat differ from the "
            "observed statistics by more than 4 standard errors "
            "(observed statistics may sit at a degenerate boundary)"
        )

    se = None
    if check_R > spec.d:
        cov = np.atleast_2d(np.cov(final.T, ddof=1))
        try:
            se = np.sqrt(np.diag(np.linalg.inv(cov)))
        except np.linalg.LinAlgError:
            se = None
    objective = float(np.sum((t_obs - mean_f) ** 2))
    return EstimateResult(
        theta_hat=theta,
        objective=objective,
        starts=[(np.asarray(theta0, dtype=float), theta.copy(), objective)],
        boundary_flag=False,
        method="mcmc-mle",
        standard_errors=se,
        converged=converged_by_tol and score_ok,
        iterations=iterations,
        message=message,
        trajectory=np.array(trajectory),
    )
