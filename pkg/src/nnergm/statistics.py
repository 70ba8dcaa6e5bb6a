"""ERGM sufficient statistics t(g) and change statistics.

A model is an ordered list of statistic terms; the statistic vector, the
parameter vector, and every report in the toolkit share that order. Change
statistics follow the convention t(edge present) - t(edge absent) with all
other edges fixed, independent of the edge's current state.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from typing import Union

import numpy as np

from .errors import SpecError
from .graph import Graph


@dataclass(frozen=True)
class Edges:
    """Total edge count (ordered pairs if directed, unordered otherwise)."""


@dataclass(frozen=True)
class Mutual:
    """Number of mutual dyads: pairs i < j with both i->j and j->i. Directed only."""


@dataclass(frozen=True)
class Triangles:
    """Number of 3-cliques. Undirected only."""


@dataclass(frozen=True)
class Gwesp:
    """Geometrically weighted edgewise shared partners with fixed decay.

    For each present edge (i, j) with s shared partners the contribution is
    1 - (1 - decay)**s, summed over present edges. The decay is a fixed
    hyperparameter, keeping the potential linear in theta. Note this
    geometric-in-s form differs from the exponential-decay GWESP variant
    common in other network toolkits. Undirected only.
    """

    decay: float

    def __post_init__(self) -> None:
        if not 0.0 < self.decay < 1.0:
            raise SpecError("gwesp decay must satisfy 0 < decay < 1")


@dataclass(frozen=True)
class NodeMatch:
    """Count of edges whose endpoints share the same categorical attribute."""

    attribute: str


@dataclass(frozen=True)
class DyadCov:
    """Sum of a dyadic covariate over present edges.

    Undirected specs read the covariate from the upper triangle (i < j);
    directed specs read z[i, j] for each ordered pair.
    """

    covariate: str


StatTerm = Union[Edges, Mutual, Triangles, Gwesp, NodeMatch, DyadCov]

_DIRECTED_ONLY = (Mutual,)
_UNDIRECTED_ONLY = (Triangles, Gwesp)


def term_label(term: StatTerm) -> str:
    if isinstance(term, Edges):
        return "edges"
    if isinstance(term, Mutual):
        return "mutual"
    if isinstance(term, Triangles):
        return "triangles"
    if isinstance(term, Gwesp):
        return f"gwesp({term.decay:g})"
    if isinstance(term, NodeMatch):
        return f"node_match({term.attribute})"
    if isinstance(term, DyadCov):
        return f"dyad_cov({term.covariate})"
    raise SpecError(f"unknown term {term!r}")


def term_to_dict(term: StatTerm) -> dict:
    if isinstance(term, Edges):
        return {"kind": "edges"}
    if isinstance(term, Mutual):
        return {"kind": "mutual"}
    if isinstance(term, Triangles):
        return {"kind": "triangles"}
    if isinstance(term, Gwesp):
        return {"kind": "gwesp", "decay": term.decay}
    if isinstance(term, NodeMatch):
        return {"kind": "node_match", "attribute": term.attribute}
    if isinstance(term, DyadCov):
        return {"kind": "dyad_cov", "covariate": term.covariate}
    raise SpecError(f"unknown term {term!r}")


def term_from_dict(data: dict) -> StatTerm:
    kind = data.get("kind")
    if kind == "edges":
        return Edges()
    if kind == "mutual":
        return Mutual()
    if kind == "triangles":
        return Triangles()
    if kind == "gwesp":
        return Gwesp(decay=float(data["decay"]))
    if kind == "node_match":
        return NodeMatch(attribute=str(data["attribute"]))
    if kind == "dyad_cov":
        return DyadCov(covariate=str(data["covariate"]))
    raise SpecError(f"unknown term kind {kind!r}")


@dataclass
class ModelSpec:
    """Node count, directedness, ordered statistic terms, and covariate data.

    The number of terms fixes the dimension of both the statistic vector
    and the parameter vector.
    """

    n: int
    directed: bool
    terms: tuple[StatTerm, ...]
    node_attributes: dict[str, tuple[str, ...]] = field(default_factory=dict)
    dyad_covariates: dict[str, np.ndarray] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.n < 1:
            raise SpecError("node count must be >= 1")
        self.terms = tuple(self.terms)
        if not self.terms:
            raise SpecError("model needs at least one term")
        self.node_attributes = {
            key: tuple(str(v) for v in values)
            for key, values in self.node_attributes.items()
        }
        covs: dict[str, np.ndarray] = {}
        for key, z in self.dyad_covariates.items():
            arr = np.asarray(z, dtype=np.float64).copy()
            if arr.shape != (self.n, self.n):
                raise SpecError(f"dyad covariate {key!r} must be ({self.n}, {self.n})")
            if not np.isfinite(arr).all():
                raise SpecError(f"dyad covariate {key!r} has non-finite entries")
            arr.setflags(write=False)
            covs[key] = arr
        self.dyad_covariates = covs
        for term in self.terms:
            if self.directed and isinstance(term, _UNDIRECTED_ONLY):
                raise SpecError(f"{term_label(term)} requires an undirected spec")
            if not self.directed and isinstance(term, _DIRECTED_ONLY):
                raise SpecError(f"{term_label(term)} requires a directed spec")
            if isinstance(term, NodeMatch):
                values = self.node_attributes.get(term.attribute)
                if values is None:
                    raise SpecError(f"missing node attribute {term.attribute!r}")
                if len(values) != self.n:
                    raise SpecError(
                        f"node attribute {term.attribute!r} must have length {self.n}"
                    )
            if isinstance(term, DyadCov) and term.covariate not in self.dyad_covariates:
                raise SpecError(f"missing dyad covariate {term.covariate!r}")

    @property
    def d(self) -> int:
        return len(self.terms)

    def validate_graph(self, g: Graph) -> None:
        if g.n != self.n or g.directed != self.directed:
            raise SpecError(
                f"graph (n={g.n}, directed={g.directed}) does not match "
                f"spec (n={self.n}, directed={self.directed})"
            )

    def validate_theta(self, theta) -> np.ndarray:
        arr = np.asarray(theta, dtype=np.float64)
        if arr.shape != (self.d,):
            raise SpecError(f"theta must have length {self.d}, got shape {arr.shape}")
        if not np.isfinite(arr).all():
            raise SpecError("theta must be finite")
        return arr

    def cache_key(self) -> tuple:
        cov_digest = tuple(
            (key, hashlib.sha256(self.dyad_covariates[key].tobytes()).hexdigest())
            for key in sorted(self.dyad_covariates)
        )
        attrs = tuple((key, self.node_attributes[key]) for key in sorted(self.node_attributes))
        return (self.n, self.directed, self.terms, attrs, cov_digest)

    def term_labels(self) -> list[str]:
        return [term_label(t) for t in self.terms]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "directed": self.directed,
            "terms": [term_to_dict(t) for t in self.terms],
            "node_attributes": {k: list(v) for k, v in self.node_attributes.items()},
            "dyad_covariates": {k: v.tolist() for k, v in self.dyad_covariates.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "ModelSpec":
        return cls(
            n=int(data["n"]),
            directed=bool(data["directed"]),
            terms=tuple(term_from_dict(t) for t in data["terms"]),
            node_attributes={
                k: tuple(v) for k, v in data.get("node_attributes", {}).items()
            },
            dyad_covariates={
                k: np.asarray(v, dtype=np.float64)
                for k, v in data.get("dyad_covariates", {}).items()
            },
        )


def _match_matrix(spec: ModelSpec, attribute: str) -> np.ndarray:
    x = np.asarray(spec.node_attributes[attribute], dtype=object)
    return x[:, None] == x[None, :]


def _upper(n: int) -> tuple[np.ndarray, np.ndarray]:
    return np.triu_indices(n, k=1)


def compute_stats(spec: ModelSpec, g: Graph) -> np.ndarray:
    """Exact statistic vector t(g) in spec term order."""
    spec.validate_graph(g)
    adj = g.adjacency
    n = spec.n
    iu = _upper(n)
    out = np.empty(spec.d, dtype=np.float64)
    for idx, term in enumerate(spec.terms):
        if isinstance(term, Edges):
            value = float(adj.sum()) if spec.directed else float(adj[iu].sum())
        elif isinstance(term, Mutual):
            value = float((adj & adj.T)[iu].sum())
        elif isinstance(term, Triangles):
            a = adj.astype(np.int64)
            value = float(((a @ a) * a).sum() // 6)
        elif isinstance(term, Gwesp):
            a = adj.astype(np.int64)
            shared = a @ a
            s_vals = shared[iu][adj[iu]]
            value = float((1.0 - (1.0 - term.decay) ** s_vals).sum())
        elif isinstance(term, NodeMatch):
            m = _match_matrix(spec, term.attribute)
            picked = (m & adj) if spec.directed else (m & adj)[iu]
            value = float(np.count_nonzero(picked))
        elif isinstance(term, DyadCov):
            z = spec.dyad_covariates[term.covariate]
            if spec.directed:
                value = float(z[adj].sum())
            else:
                value = float(z[iu][adj[iu]].sum())
        else:
            raise SpecError(f"unknown term {term!r}")
        out[idx] = value
    return out


def _gwesp_change(spec: ModelSpec, adj: np.ndarray, i: int, j: int, decay: float) -> float:
    # Work on the off-state: the (i, j) indicator cleared, everything else as is.
    row_i = adj[i].copy()
    row_j = adj[j].copy()
    row_i[j] = False
    row_j[i] = False
    common = row_i & row_j
    delta = 1.0 - (1.0 - decay) ** int(common.sum())
    for k in np.flatnonzero(common):
        # Edges (i,k) and (j,k) each gain one shared partner; rows for k are
        # unaffected by the (i,j) dyad, so plain popcounts give off-state s.
        s_ik = int((row_i & adj[k]).sum())
        s_jk = int((row_j & adj[k]).sum())
        delta += decay * ((1.0 - decay) ** s_ik + (1.0 - decay) ** s_jk)
    return delta


def change_stats(spec: ModelSpec, g: Graph, i: int, j: int) -> np.ndarray:
    """t(g with edge (i,j) present) - t(g with it absent), other edges fixed.

    Computed incrementally; Gwesp recomputes the affected edge terms only.
    """
    spec.validate_graph(g)
    if i == j:
        raise ValueError(f"self-loop ({i}, {j}) is not allowed")
    for node in (i, j):
        if not 0 <= node < spec.n:
            raise ValueError(f"node {node} out of range for n={spec.n}")
    adj = g.adjacency
    out = np.empty(spec.d, dtype=np.float64)
    for idx, term in enumerate(spec.terms):
        if isinstance(term, Edges):
            value = 1.0
        elif isinstance(term, Mutual):
            value = 1.0 if adj[j, i] else 0.0
        elif isinstance(term, Triangles):
            value = float(np.count_nonzero(adj[i] & adj[j]))
        elif isinstance(term, Gwesp):
            value = _gwesp_change(spec, adj, i, j, term.decay)
        elif isinstance(term, NodeMatch):
            values = spec.node_attributes[term.attribute]
            value = 1.0 if values[i] == values[j] else 0.0
        elif isinstance(term, DyadCov):
            z = spec.dyad_covariates[term.covariate]
            value = float(z[i, j]) if spec.directed else float(z[min(i, j), max(i, j)])
        else:
            raise SpecError(f"unknown term {term!r}")
        out[idx] = value
    return out


def parse_node_attributes_csv(text: str, n: int) -> dict[str, tuple[str, ...]]:
    """Parse ``node,<attr>,...`` CSV; rows must be 0..n-1 in order."""
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise SpecError("empty node attribute CSV")
    header = [h.strip() for h in lines[0].split(",")]
    if header[0] != "node" or len(header) < 2:
        raise SpecError("node attribute CSV header must be 'node,<attr>,...'")
    names = header[1:]
    columns: dict[str, list[str]] = {name: [] for name in names}
    if len(lines) - 1 != n:
        raise SpecError(f"expected {n} attribute rows, found {len(lines) - 1}")
    for expected, line in enumerate(lines[1:]):
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != len(header):
            raise SpecError(f"attribute row {expected} has {len(cells)} cells, expected {len(header)}")
        if int(cells[0]) != expected:
            raise SpecError(f"attribute rows must be sorted by node; row {expected} is node {cells[0]}")
        for name, cell in zip(names, cells[1:]):
            columns[name].append(cell)
    return {name: tuple(vals) for name, vals in columns.items()}


def parse_dyad_covariate_csv(text: str, n: int, directed: bool) -> np.ndarray:
    """Parse ``i,j,value`` CSV into an (n, n) matrix; missing pairs are 0.

    For undirected use, entries are normalized to the upper triangle and
    mirrored so z[i, j] == z[j, i].
    """
    z = np.zeros((n, n), dtype=np.float64)
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise SpecError("empty dyad covariate CSV")
    header = [h.strip() for h in lines[0].split(",")]
    if header != ["i", "j", "value"]:
        raise SpecError("dyad covariate CSV header must be 'i,j,value'")
    seen: set[tuple[int, int]] = set()
    for lineno, line in enumerate(lines[1:], start=2):
        cells = [c.strip() for c in line.split(",")]
        if len(cells) != 3:
            raise SpecError(f"malformed covariate row at line {lineno}")
        i, j, value = int(cells[0]), int(cells[1]), float(cells[2])
        if i == j or not (0 <= i < n and 0 <= j < n):
            raise SpecError(f"invalid pair ({i}, {j}) at line {lineno}")
        key = (i, j) if directed else (min(i, j), max(i, j))
        if key in seen:
            raise SpecError(f"duplicate pair ({i}, {j}) at line {lineno}")
        seen.add(key)
        if directed:
            z[i, j] = value
        else:
            z[key[0], key[1]] = value
            z[key[1], key[0]] = value
    return z
