"""Metropolis-Hastings simulation and exact enumeration for graph models.

The sampler proposes single-dyad toggles uniformly at random and accepts
with probability min(1, exp(sign * theta @ delta)), where delta is the
change-statistic vector of the proposed dyad. Statistics are tracked
incrementally in a numba kernel and audited against a from-scratch
recomputation at the end of every chain.
"""

from __future__ import annotations

from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Union

import numpy as np
from numba import njit

from .errors import EnumerationError, SamplerError
from .graph import Graph, dyad_pairs
from .statistics import (
    DyadCov,
    Edges,
    Gwesp,
    ModelSpec,
    Mutual,
    NodeMatch,
    Triangles,
    compute_stats,
)

__all__ = [
    "Empty",
    "RandomDensity",
    "Given",
    "ChainInit",
    "SamplerConfig",
    "simulate_stats",
    "simulate_graphs",
    "mean_stats",
    "exact_mean_stats",
]

# Term codes used by the compiled kernel.
_KIND_EDGES = 0
_KIND_MUTUAL = 1
_KIND_TRIANGLES = 2
_KIND_GWESP = 3
_KIND_WEIGHTED = 4

# Acceptance-ratio exponents are clamped here before exp() so that extreme
# coefficient values saturate instead of overflowing.
_EXP_CLAMP = 700.0

# Proposal randomness is consumed in fixed-size blocks (dyad indices first,
# then accept/reject uniforms) so the draw sequence depends only on the seed
# and the chain length, never on how samples are recorded.
_BLOCK = 1 << 22

_ENUM_MAX_DYADS = 20
_ENUM_CACHE_MAX = 4
_enum_cache: "OrderedDict[tuple, np.ndarray]" = OrderedDict()


@dataclass(frozen=True)
class Empty:
    """Start the chain from the empty graph."""


@dataclass(frozen=True)
class RandomDensity:
    """Start from a Bernoulli graph with the given edge probability."""

    p: float

    def __post_init__(self):
        if not 0.0 <= self.p <= 1.0:
            raise ValueError(f"density must be in [0, 1], got {self.p}")


@dataclass(frozen=True)
class Given:
    """Start from a caller-supplied graph."""

    graph: Graph


ChainInit = Union[Empty, RandomDensity, Given]


@dataclass
class SamplerConfig:
    burn_in_sweeps: int = 50
    thinning_sweeps: int = 5
    init: ChainInit = field(default_factory=Empty)
    audit: bool = True

    def __post_init__(self):
        if self.burn_in_sweeps < 0:
            raise ValueError("burn_in_sweeps must be >= 0")
        if self.thinning_sweeps < 1:
            raise ValueError("thinning_sweeps must be >= 1")


def init_to_dict(init: ChainInit) -> dict:
    if isinstance(init, Empty):
        return {"kind": "empty"}
    if isinstance(init, RandomDensity):
        return {"kind": "random_density", "p": init.p}
    if isinstance(init, Given):
        from .graph import write_edge_list

        return {"kind": "given", "edge_list": write_edge_list(init.graph)}
    raise TypeError(f"unknown chain init {init!r}")


def init_from_dict(data: dict) -> ChainInit:
    kind = data["kind"]
    if kind == "empty":
        return Empty()
    if kind == "random_density":
        return RandomDensity(float(data["p"]))
    if kind == "given":
        from .graph import read_edge_list

        return Given(read_edge_list(data["edge_list"]))
    raise ValueError(f"unknown chain init kind {kind!r}")


def config_to_dict(config: SamplerConfig) -> dict:
    return {
        "burn_in_sweeps": config.burn_in_sweeps,
        "thinning_sweeps": config.thinning_sweeps,
        "init": init_to_dict(config.init),
        "audit": config.audit,
    }


def config_from_dict(data: dict) -> SamplerConfig:
    return SamplerConfig(
        burn_in_sweeps=int(data["burn_in_sweeps"]),
        thinning_sweeps=int(data["thinning_sweeps"]),
        init=init_from_dict(data["init"]),
        audit=bool(data["audit"]),
    )


def _weight_matrix(spec: ModelSpec, term) -> np.ndarray:
    """Per-dyad change-statistic weights for node-match / dyad-covariate terms."""
    n = spec.n
    if isinstance(term, NodeMatch):
        attrs = spec.node_attributes[term.attribute]
        w = np.zeros((n, n))
        for i in range(n):
            for j in range(n):
                if i != j and attrs[i] == attrs[j]:
                    w[i, j] = 1.0
        return w
    z = spec.dyad_covariates[term.covariate]
    if spec.directed:
        return np.array(z, dtype=np.float64)
    upper = np.triu(z, 1)
    return upper + upper.T


def _encode_terms(spec: ModelSpec):
    d = spec.d
    kinds = np.zeros(d, dtype=np.int64)
    decays = np.zeros(d, dtype=np.float64)
    weights = np.zeros((d, spec.n, spec.n), dtype=np.float64)
    for k, term in enumerate(spec.terms):
        if isinstance(term, Edges):
            kinds[k] = _KIND_EDGES
        elif isinstance(term, Mutual):
            kinds[k] = _KIND_MUTUAL
        elif isinstance(term, Triangles):
            kinds[k] = _KIND_TRIANGLES
        elif isinstance(term, Gwesp):
            kinds[k] = _KIND_GWESP
            decays[k] = term.decay
        else:
            kinds[k] = _KIND_WEIGHTED
            weights[k] = _weight_matrix(spec, term)
    return kinds, decays, weights


@njit(cache=True)
def _chain_block(
    adj,
    stats,
    theta,
    kinds,
    decays,
    weights,
    di,
    dj,
    idx,
    unif,
    directed,
    step0,
    rec0,
    sweep,
    burn,
    thin,
    out_stats,
    out_adj,
    record_adj,
):
    n = adj.shape[0]
    d = theta.shape[0]
    delta = np.empty(d, dtype=np.float64)
    step = step0
    rec = rec0
    m_max = out_stats.shape[0]
    next_rec = (burn + thin * (rec + 1)) * sweep
    for t in range(idx.shape[0]):
        u = idx[t]
        i = di[u]
        j = dj[u]
        for k in range(d):
            kind = kinds[k]
            if kind == 0:
                delta[k] = 1.0
            elif kind == 1:
                delta[k] = 1.0 if adj[j, i] != 0 else 0.0
            elif kind == 2:
                c = 0
                for m in range(n):
                    if adj[i, m] != 0 and adj[j, m] != 0:
                        c += 1
                delta[k] = c
            elif kind == 3:
                was = adj[i, j]
                adj[i, j] = 0
                adj[j, i] = 0
                alpha = decays[k]
                q = 1.0 - alpha
                cn = 0
                acc = 0.0
                for m in range(n):
                    if adj[i, m] != 0 and adj[j, m] != 0:
                        cn += 1
                        s_im = 0
                        s_jm = 0
                        for r in range(n):
                            if adj[m, r] != 0:
                                if adj[i, r] != 0:
                                    s_im += 1
                                if adj[j, r] != 0:
                                    s_jm += 1
                        acc += q ** s_im + q ** s_jm
                delta[k] = (1.0 - q ** cn) + alpha * acc
                if was != 0:
                    adj[i, j] = 1
                    adj[j, i] = 1
            else:
                delta[k] = weights[k, i, j]
        logr = 0.0
        for k in range(d):
            logr += theta[k] * delta[k]
        present = adj[i, j] != 0
        if present:
            logr = -logr
        if logr > _EXP_CLAMP:
            logr = _EXP_CLAMP
        elif logr < -_EXP_CLAMP:
            logr = -_EXP_CLAMP
        if unif[t] < np.exp(logr):
            if present:
                adj[i, j] = 0
                if not directed:
                    adj[j, i] = 0
                for k in range(d):
                    stats[k] -= delta[k]
            else:
                adj[i, j] = 1
                if not directed:
                    adj[j, i] = 1
                for k in range(d):
                    stats[k] += delta[k]
        step += 1
        if step == next_rec and rec < m_max:
            for k in range(d):
                out_stats[rec, k] = stats[k]
            if record_adj:
                for a in range(n):
                    for b in range(n):
                        out_adj[rec, a, b] = adj[a, b]
            rec += 1
            next_rec += thin * sweep
    return step, rec


def _initial_adjacency(spec: ModelSpec, init: ChainInit, rng, pairs) -> np.ndarray:
    n = spec.n
    adj = np.zeros((n, n), dtype=np.uint8)
    if isinstance(init, Empty):
        return adj
    if isinstance(init, RandomDensity):
        u = rng.random(len(pairs))
        for b, (i, j) in enumerate(pairs):
            if u[b] < init.p:
                adj[i, j] = 1
                if not spec.directed:
                    adj[j, i] = 1
        return adj
    if isinstance(init, Given):
        spec.validate_graph(init.graph)
        return init.graph.adjacency.astype(np.uint8)
    raise TypeError(f"unknown chain init {init!r}")


def _run_chain(spec, theta, n_samples, seed, config, record_graphs):
    theta = spec.validate_theta(theta)
    if n_samples < 1:
        raise ValueError("n_samples must be >= 1")
    if config is None:
        config = SamplerConfig()
    pairs = dyad_pairs(spec.n, spec.directed)
    sweep = len(pairs)
    rng = np.random.Generator(np.random.PCG64(seed))
    adj = _initial_adjacency(spec, config.init, rng, pairs)
    init_graph = Graph(spec.n, spec.directed, adj != 0)
    stats = compute_stats(spec, init_graph)

    d = spec.d
    out_stats = np.empty((n_samples, d), dtype=np.float64)
    if record_graphs:
        out_adj = np.empty((n_samples, spec.n, spec.n), dtype=np.uint8)
    else:
        out_adj = np.empty((0, 0, 0), dtype=np.uint8)

    if sweep == 0:
        # No free dyads (n < 2): the chain is the initial graph forever.
        out_stats[:] = stats
        if record_graphs:
            out_adj[:] = adj
        return out_stats, out_adj, adj, config

    kinds, decays, weights = _encode_terms(spec)
    di = np.array([p[0] for p in pairs], dtype=np.int64)
    dj = np.array([p[1] for p in pairs], dtype=np.int64)
    total = (config.burn_in_sweeps + config.thinning_sweeps * n_samples) * sweep
    step = 0
    rec = 0
    while step < total:
        block = min(_BLOCK, total - step)
        idx = rng.integers(0, sweep, size=block, dtype=np.int64)
        unif = rng.random(block)
        step, rec = _chain_block(
            adj,
            stats,
            theta,
            kinds,
            decays,
            weights,
            di,
            dj,
            idx,
            unif,
            spec.directed,
            step,
            rec,
            sweep,
            config.burn_in_sweeps,
            config.thinning_sweeps,
            out_stats,
            out_adj,
            record_graphs,
        )
    if rec != n_samples:
        raise SamplerError(f"recorded {rec} of {n_samples} samples")

    if config.audit:
        final = compute_stats(spec, Graph(spec.n, spec.directed, adj != 0))
        if not np.allclose(stats, final, rtol=1e-9, atol=1e-6):
            raise SamplerError(
                "incremental statistics drifted from recomputed values: "
                f"tracked {stats.tolist()}, recomputed {final.tolist()}"
            )
    return out_stats, out_adj, adj, config


def simulate_stats(spec, theta, n_samples, seed, config=None) -> np.ndarray:
    """Draw ``n_samples`` statistic vectors from one Markov chain.

    Returns an (n_samples, d) array recorded every ``thinning_sweeps``
    sweeps after ``burn_in_sweeps`` sweeps of burn-in, where one sweep is
    one proposal per free dyad.
    """
    out_stats, _, _, _ = _run_chain(spec, theta, n_samples, seed, config, False)
    return out_stats


def simulate_graphs(spec, theta, n_samples, seed, config=None) -> list:
    """Like :func:`simulate_stats` but return the retained graphs."""
    _, out_adj, _, _ = _run_chain(spec, theta, n_samples, seed, config, True)
    return [Graph(spec.n, spec.directed, out_adj[m] != 0) for m in range(n_samples)]


def mean_stats(spec, theta, n_samples, seed, config=None):
    """Monte Carlo estimate of E[t(G)] with its standard error.

    Returns ``(mean, se)`` where both are (d,) arrays and ``se`` is the
    naive standard error of the mean (correlated-draw caveats apply).
    """
    draws = simulate_stats(spec, theta, n_samples, seed, config)
    mean = draws.mean(axis=0)
    if n_samples > 1:
        se = draws.std(axis=0, ddof=1) / np.sqrt(n_samples)
    else:
        se = np.zeros_like(mean)
    return mean, se


def _build_stat_table(spec: ModelSpec) -> np.ndarray:
    pairs = dyad_pairs(spec.n, spec.directed)
    m = len(pairs)
    if m > _ENUM_MAX_DYADS:
        raise EnumerationError(
            f"model has {m} free dyads; exact enumeration is capped at "
            f"{_ENUM_MAX_DYADS} (2^{_ENUM_MAX_DYADS} graphs)"
        )
    size = 1 << m
    codes = np.arange(size, dtype=np.uint32)
    bits = np.empty((size, m), dtype=np.uint8)
    for b in range(m):
        bits[:, b] = (codes >> b) & 1

    slot = {}
    for b, (i, j) in enumerate(pairs):
        slot[(i, j)] = b
        if not spec.directed:
            slot[(j, i)] = b

    n = spec.n
    T = np.zeros((size, spec.d), dtype=np.float64)
    for k, term in enumerate(spec.terms):
        if isinstance(term, Edges):
            T[:, k] = bits.sum(axis=1, dtype=np.int64)
        elif isinstance(term, Mutual):
            for i in range(n):
                for j in range(i + 1, n):
                    T[:, k] += bits[:, slot[(i, j)]] * bits[:, slot[(j, i)]]
        elif isinstance(term, Triangles):
            for a in range(n):
                for b_ in range(a + 1, n):
                    for c in range(b_ + 1, n):
                        T[:, k] += (
                            bits[:, slot[(a, b_)]]
                            * bits[:, slot[(a, c)]]
                            * bits[:, slot[(b_, c)]]
                        )
        elif isinstance(term, Gwesp):
            q = 1.0 - term.decay
            for (i, j) in pairs:
                shared = np.zeros(size, dtype=np.float64)
                for other in range(n):
                    if other == i or other == j:
                        continue
                    shared += bits[:, slot[(i, other)]] * bits[:, slot[(j, other)]]
                T[:, k] += bits[:, slot[(i, j)]] * (1.0 - q ** shared)
        else:
            w = _weight_matrix(spec, term)
            for b, (i, j) in enumerate(pairs):
                T[:, k] += w[i, j] * bits[:, b]
    return T


def _stat_table(spec: ModelSpec) -> np.ndarray:
    key = spec.cache_key()
    if key in _enum_cache:
        _enum_cache.move_to_end(key)
        return _enum_cache[key]
    table = _build_stat_table(spec)
    _enum_cache[key] = table
    while len(_enum_cache) > _ENUM_CACHE_MAX:
        _enum_cache.popitem(last=False)
    return table


def exact_mean_stats(spec: ModelSpec, theta) -> np.ndarray:
    """Exact E[t(G)] by summing over every graph on the free dyads.

    Only feasible for tiny models; raises EnumerationError when the model
    has more than 20 free dyads. The statistic table is cached per spec
    so repeated calls with different coefficients are cheap.
    """
    theta = spec.validate_theta(theta)
    T = _stat_table(spec)
    logw = T @ theta
    logw -= logw.max()
    w = np.exp(logw)
    return (w @ T) / w.sum()
