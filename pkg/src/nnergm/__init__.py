"""nnergm: neural-network surrogate estimation for random graph models.

Simulate exponential-family random graphs, learn the map from coefficients
to expected sufficient statistics with a small feedforward network, and
estimate coefficients by inverting that map -- with pseudolikelihood and
stochastic-approximation MLE baselines, exact small-graph oracles, and a
reproducible CLI pipeline.
"""

from .baselines import MpleResult, RobbinsMonroConfig, mcmc_mle, mple
from .errors import (
    CollinearityError,
    DegeneracyError,
    EnumerationError,
    EstimationError,
    GraphFormatError,
    NnergmError,
    SamplerError,
    SpecError,
    TrainingDivergedError,
)
from .estimator import (
    DegeneracyMap,
    EstimateResult,
    GofReport,
    GofRow,
    degeneracy_scan,
    goodness_of_fit,
    invert,
    standard_errors,
)
from .graph import (
    Graph,
    dyad_pairs,
    from_edges,
    max_edges,
    new_empty,
    random_graph,
    read_edge_list,
    toggle_edge,
    write_edge_list,
)
from .sampler import (
    ChainInit,
    Empty,
    Given,
    RandomDensity,
    SamplerConfig,
    exact_mean_stats,
    mean_stats,
    simulate_graphs,
    simulate_stats,
)
from .seeds import mix
from .statistics import (
    DyadCov,
    Edges,
    Gwesp,
    ModelSpec,
    Mutual,
    NodeMatch,
    StatTerm,
    Triangles,
    change_stats,
    compute_stats,
    parse_dyad_covariate_csv,
    parse_node_attributes_csv,
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

__version__ = "0.1.0"

__all__ = [
    "ArchConfig",
    "ChainInit",
    "CollinearityError",
    "DegeneracyError",
    "DegeneracyMap",
    "DyadCov",
    "Edges",
    "Empty",
    "EnumerationError",
    "EstimateResult",
    "EstimationError",
    "Given",
    "GofReport",
    "GofRow",
    "Graph",
    "GraphFormatError",
    "Gwesp",
    "ModelSpec",
    "MpleResult",
    "Mutual",
    "NnergmError",
    "NodeMatch",
    "PriorBox",
    "RandomDensity",
    "RobbinsMonroConfig",
    "SamplerConfig",
    "SamplerError",
    "SpecError",
    "StatTerm",
    "SurrogateModel",
    "TrainConfig",
    "TrainingDataset",
    "TrainingDivergedError",
    "Triangles",
    "change_stats",
    "compute_stats",
    "degeneracy_scan",
    "dyad_pairs",
    "exact_mean_stats",
    "from_edges",
    "generate_training_set",
    "goodness_of_fit",
    "invert",
    "max_edges",
    "mcmc_mle",
    "mean_stats",
    "mix",
    "mple",
    "new_empty",
    "parse_dyad_covariate_csv",
    "parse_node_attributes_csv",
    "random_graph",
    "read_edge_list",
    "simulate_graphs",
    "simulate_stats",
    "standard_errors",
    "toggle_edge",
    "train",
    "write_edge_list",
]
