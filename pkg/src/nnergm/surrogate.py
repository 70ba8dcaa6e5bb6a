"""Training-set generation and the feedforward surrogate of theta -> E[t(G)].

The training set is a list of (theta, mean simulated statistics) pairs over
a box; rows are embarrassingly parallel and seeded per-row so the dataset
is byte-identical for any worker count. The surrogate is a small
fully-connected network (rectified-linear hidden layers, linear output)
trained with mini-batch Adam on standardized inputs and outputs.
"""

from __future__ import annotations

import hashlib
import json
import os
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime, timezone

import numpy as np

from .errors import SpecError, TrainingDivergedError
from .sampler import SamplerConfig, config_from_dict, config_to_dict, mean_stats
from .seeds import mix
from .statistics import ModelSpec

__all__ = [
    "PriorBox",
    "TrainingDataset",
    "ArchConfig",
    "TrainConfig",
    "SurrogateModel",
    "generate_training_set",
    "train",
]

_DATASET_FORMAT = "nnergm-dataset-v1"
_MODEL_FORMAT = "nnergm-model-v1"


@dataclass(frozen=True)
class PriorBox:
    """Axis-aligned box of admissible coefficient vectors."""

    lower: tuple
    upper: tuple

    def __post_init__(self):
        lo = tuple(float(v) for v in self.lower)
        hi = tuple(float(v) for v in self.upper)
        object.__setattr__(self, "lower", lo)
        object.__setattr__(self, "upper", hi)
        if len(lo) != len(hi):
            raise ValueError("lower and upper must have equal length")
        if len(lo) == 0:
            raise ValueError("box must have at least one dimension")
        if not all(a < b for a, b in zip(lo, hi)):
            raise ValueError("box requires lower < upper coordinatewise")

    @property
    def d(self) -> int:
        return len(self.lower)

    @property
    def lo(self) -> np.ndarray:
        return np.array(self.lower)

    @property
    def hi(self) -> np.ndarray:
        return np.array(self.upper)

    def contains(self, theta, atol: float = 0.0) -> bool:
        t = np.asarray(theta, dtype=float)
        return bool(np.all(t >= self.lo - atol) and np.all(t <= self.hi + atol))

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        return rng.uniform(self.lo, self.hi, size=(count, self.d))

    def to_dict(self) -> dict:
        return {"lower": list(self.lower), "upper": list(self.upper)}

    @classmethod
    def from_dict(cls, data: dict) -> "PriorBox":
        return cls(tuple(data["lower"]), tuple(data["upper"]))


def _format_float(x: float) -> str:
    return repr(float(x))


@dataclass
class TrainingDataset:
    """Rows of (theta, mean statistics) plus generation metadata."""

    thetas: np.ndarray
    stats: np.ndarray
    metadata: dict

    def __post_init__(self):
        self.thetas = np.asarray(self.thetas, dtype=np.float64)
        self.stats = np.asarray(self.stats, dtype=np.float64)
        if self.thetas.ndim != 2 or self.stats.ndim != 2:
            raise ValueError("thetas and stats must be 2-d arrays")
        if self.thetas.shape[0] != self.stats.shape[0]:
            raise ValueError("thetas and stats must have the same row count")

    @property
    def L(self) -> int:
        return self.thetas.shape[0]

    @property
    def p(self) -> int:
        return self.thetas.shape[1]

    @property
    def d(self) -> int:
        return self.stats.shape[1]

    def to_csv(self) -> str:
        header = [f"theta_{k}" for k in range(self.p)] + [
            f"stat_{k}" for k in range(self.d)
        ]
        lines = [",".join(header)]
        for row in range(self.L):
            vals = [_format_float(v) for v in self.thetas[row]]
            vals += [_format_float(v) for v in self.stats[row]]
            lines.append(",".join(vals))
        return "\n".join(lines) + "\n"

    def fingerprint(self) -> str:
        return hashlib.sha256(self.to_csv().encode("utf-8")).hexdigest()

    @classmethod
    def from_csv(cls, text: str, metadata: dict | None = None) -> "TrainingDataset":
        lines = [ln for ln in text.splitlines() if ln.strip()]
        if not lines:
            raise ValueError("empty dataset file")
        header = lines[0].split(",")
        p = sum(1 for h in header if h.startswith("theta_"))
        d = sum(1 for h in header if h.startswith("stat_"))
        if p == 0 or d == 0 or p + d != len(header):
            raise ValueError(f"unrecognized dataset header {lines[0]!r}")
        rows = np.array(
            [[float(v) for v in ln.split(",")] for ln in lines[1:]], dtype=np.float64
        )
        if rows.shape[1] != p + d:
            raise ValueError("dataset row width does not match header")
        return cls(rows[:, :p], rows[:, p:], metadata or {})

    def save(self, path: str) -> None:
        from .io import atomic_write_text

        atomic_write_text(path, self.to_csv())
        atomic_write_text(_sidecar_path(path), json.dumps(self.metadata, indent=2) + "\n")

    @classmethod
    def load(cls, path: str) -> "TrainingDataset":
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
        meta_path = _sidecar_path(path)
        metadata = {}
        if os.path.exists(meta_path):
            with open(meta_path, "r", encoding="utf-8") as fh:
                metadata = json.load(fh)
        return cls.from_csv(text, metadata)


def _sidecar_path(path: str) -> str:
    base, _ = os.path.splitext(path)
    return base + ".meta.json"


def _mean_task(args):
    spec, theta, m, seed, config = args
    return mean_stats(spec, theta, m, seed, config)[0]


def _worker_count(requested: int) -> int:
    cap = os.environ.get("NNERGM_THREADS")
    workers = max(1, int(requested))
    if cap:
        workers = min(workers, max(1, int(cap)))
    return workers


def generate_training_set(
    spec: ModelSpec,
    box: PriorBox,
    L: int,
    M: int,
    sampler_config: SamplerConfig | None = None,
    master_seed: int = 0,
    max_parallelism: int = 1,
    timestamp: str | None = None,
) -> TrainingDataset:
    """Simulate the (theta, mean statistics) training rows.

    Designs are drawn uniformly on the box from a dedicated stream
    (mix(master_seed, 0)); row ``l`` simulates with seed
    mix(master_seed, 1 + l). The output is byte-identical for any
    ``max_parallelism``.
    """
    if L < 1 or M < 1:
        raise ValueError("L and M must be >= 1")
    if box.d != spec.d:
        raise SpecError(f"box dimension {box.d} != number of terms {spec.d}")
    if sampler_config is None:
        sampler_config = SamplerConfig()
    design_rng = np.random.Generator(np.random.PCG64(mix(master_seed, 0)))
    thetas = box.sample(design_rng, L)

    tasks = [
        (spec, thetas[row], M, mix(master_seed, 1 + row), sampler_config)
        for row in range(L)
    ]
    workers = _worker_count(max_parallelism)
    if workers == 1:
        stats = [_mean_task(t) for t in tasks]
    else:
        chunk = max(1, L // (4 * workers))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            stats = list(pool.map(_mean_task, tasks, chunksize=chunk))
    stats = np.vstack(stats)

    metadata = {
        "format": _DATASET_FORMAT,
        "spec": spec.to_dict(),
        "box": box.to_dict(),
        "L": L,
        "M": M,
        "master_seed": master_seed,
        "sampler": config_to_dict(sampler_config),
        "created_at": timestamp
        or datetime.now(timezone.utc).isoformat(timespec="seconds"),
    }
    return TrainingDataset(thetas, stats, metadata)


@dataclass(frozen=True)
class ArchConfig:
    hidden_widths: tuple = (128, 64)
    dropout_rate: float = 0.2

    def __post_init__(self):
        object.__setattr__(self, "hidden_widths", tuple(int(w) for w in self.hidden_widths))
        if any(w <= 0 for w in self.hidden_widths):
            raise ValueError("hidden widths must be positive")
        if not 0.0 <= self.dropout_rate < 1.0:
            raise ValueError("dropout_rate must be in [0, 1)")

    def to_dict(self) -> dict:
        return {
            "hidden_widths": list(self.hidden_widths),
            "dropout_rate": self.dropout_rate,
            "hidden_activation": "relu",
            "output_activation": "linear",
        }


@dataclass(frozen=True)
class TrainConfig:
    epochs: int = 200
    validation_fraction: float = 0.2
    batch_size: int = 64
    learning_rate: float = 1e-3
    seed: int = 0

    def __post_init__(self):
        if self.epochs < 1:
            raise ValueError("epochs must be >= 1")
        if not 0.0 < self.validation_fraction < 1.0:
            raise ValueError("validation_fraction must be in (0, 1)")
        if self.batch_size < 1:
            raise ValueError("batch_size must be >= 1")

    def to_dict(self) -> dict:
        return {
            "epochs": self.epochs,
            "validation_fraction": self.validation_fraction,
            "batch_size": self.batch_size,
            "learning_rate": self.learning_rate,
            "seed": self.seed,
        }


def _relu(z):
    return np.maximum(z, 0.0)


@dataclass
class SurrogateModel:
    """Trained feedforward map from coefficients to expected statistics.

    Weights are stored row-major as (fan_out, fan_in); prediction applies
    input standardization, the relu stack without dropout, and output
    de-standardization.
    """

    weights: list
    biases: list
    arch: ArchConfig
    in_mean: np.ndarray
    in_scale: np.ndarray
    out_mean: np.ndarray
    out_scale: np.ndarray
    history: dict
    dataset_fingerprint: str
    meta: dict = field(default_factory=dict)

    @property
    def d_in(self) -> int:
        return self.weights[0].shape[1]

    @property
    def d_out(self) -> int:
        return self.weights[-1].shape[0]

    def _check_input(self, theta) -> np.ndarray:
        arr = np.asarray(theta, dtype=np.float64)
        squeeze = arr.ndim == 1
        if squeeze:
            arr = arr[None, :]
        if arr.ndim != 2 or arr.shape[1] != self.d_in:
            raise SpecError(
                f"input has shape {np.shape(theta)}, model expects vectors of "
                f"length {self.d_in}"
            )
        box = self.meta.get("box")
        if box is not None:
            b = PriorBox.from_dict(box)
            if np.any(arr < b.lo) or np.any(arr > b.hi):
                warnings.warn(
                    "evaluating the surrogate outside its training box",
                    RuntimeWarning,
                    stacklevel=3,
                )
        return arr, squeeze

    def _forward(self, x_std: np.ndarray) -> np.ndarray:
        h = x_std
        last = len(self.weights) - 1
        for layer, (w, b) in enumerate(zip(self.weights, self.biases)):
            h = h @ w.T + b
            if layer < last:
                h = _relu(h)
        return h

    def predict(self, theta) -> np.ndarray:
        arr, squeeze = self._check_input(theta)
        x = (arr - self.in_mean) / self.in_scale
        out = self._forward(x) * self.out_scale + self.out_mean
        return out[0] if squeeze else out

    def input_jacobian(self, theta) -> np.ndarray:
        """Exact derivative of predict at theta (relu' (0) taken as 0)."""
        arr, squeeze = self._check_input(theta)
        if not squeeze:
            raise SpecError("input_jacobian expects a single coefficient vector")
        x = (arr[0] - self.in_mean) / self.in_scale
        jac = np.diag(1.0 / self.in_scale)
        h = x
        last = len(self.weights) - 1
        for layer, (w, b) in enumerate(zip(self.weights, self.biases)):
            z = w @ h + b
            jac = w @ jac
            if layer < last:
                active = z > 0.0
                h = np.where(active, z, 0.0)
                jac = jac * active[:, None]
            else:
                h = z
        return self.out_scale[:, None] * jac

    def lipschitz_bound(self) -> float:
        """Product of layer operator norms, including the normalization maps."""
        bound = np.max(self.out_scale) / np.min(self.in_scale)
        for w in self.weights:
            bound *= np.linalg.norm(w, 2)
        return float(bound)

    def to_json_dict(self) -> dict:
        return {
            "format": _MODEL_FORMAT,
            "arch": self.arch.to_dict(),
            "layers": [
                {"weight": w.tolist(), "bias": b.tolist()}
                for w, b in zip(self.weights, self.biases)
            ],
            "input_norm": {"mean": self.in_mean.tolist(), "scale": self.in_scale.tolist()},
            "output_norm": {"mean": self.out_mean.tolist(), "scale": self.out_scale.tolist()},
            "history": self.history,
            "dataset_fingerprint": self.dataset_fingerprint,
            "meta": self.meta,
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "SurrogateModel":
        if data.get("format") != _MODEL_FORMAT:
            raise ValueError(f"not a surrogate model file (format={data.get('format')!r})")
        arch = ArchConfig(
            tuple(data["arch"]["hidden_widths"]), float(data["arch"]["dropout_rate"])
        )
        weights = [np.array(layer["weight"], dtype=np.float64) for layer in data["layers"]]
        biases = [np.array(layer["bias"], dtype=np.float64) for layer in data["layers"]]
        return cls(
            weights=weights,
            biases=biases,
            arch=arch,
            in_mean=np.array(data["input_norm"]["mean"], dtype=np.float64),
            in_scale=np.array(data["input_norm"]["scale"], dtype=np.float64),
            out_mean=np.array(data["output_norm"]["mean"], dtype=np.float64),
            out_scale=np.array(data["output_norm"]["scale"], dtype=np.float64),
            history=data["history"],
            dataset_fingerprint=data["dataset_fingerprint"],
            meta=data.get("meta", {}),
        )

    def save(self, path: str) -> None:
        from .io import atomic_write_text

        atomic_write_text(path, json.dumps(self.to_json_dict(), indent=2) + "\n")

    @classmethod
    def load(cls, path: str) -> "SurrogateModel":
        with open(path, "r", encoding="utf-8") as fh:
            return cls.from_json_dict(json.load(fh))


def _init_layers(dims, rng):
    weights = []
    biases = []
    for layer in range(len(dims) - 1):
        fan_in, fan_out = dims[layer], dims[layer + 1]
        if layer < len(dims) - 2:
            scale = np.sqrt(2.0 / fan_in)
        else:
            scale = np.sqrt(1.0 / fan_in)
        weights.append(rng.normal(0.0, scale, size=(fan_out, fan_in)))
        biases.append(np.zeros(fan_out))
    return weights, biases


def _std_moments(arr):
    mean = arr.mean(axis=0)
    scale = arr.std(axis=0)
    scale = np.where(scale < 1e-12, 1.0, scale)
    return mean, scale


def train(dataset: TrainingDataset, arch: ArchConfig | None = None,
          cfg: TrainConfig | None = None) -> SurrogateModel:
    """Fit the surrogate by mini-batch Adam on standardized squared error.

    The validation fraction is split off by a seeded shuffle;
    standardization moments come from the training split only. Dropout is
    inverted (scaled at train time) and never applied at prediction.
    Returns the final-epoch weights with per-epoch train/validation losses.
    """
    if arch is None:
        arch = ArchConfig()
    if cfg is None:
        cfg = TrainConfig()
    L = dataset.L
    if L < 10:
        raise ValueError(f"need at least 10 rows to train, got {L}")
    n_val = int(round(L * cfg.validation_fraction))
    n_val = min(max(n_val, 1), L - 1)

    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    perm = rng.permutation(L)
    val_idx, train_idx = perm[:n_val], perm[n_val:]

    x_train = dataset.thetas[train_idx]
    y_train = dataset.stats[train_idx]
    in_mean, in_scale = _std_moments(x_train)
    out_mean, out_scale = _std_moments(y_train)

    xs = (x_train - in_mean) / in_scale
    ys = (y_train - out_mean) / out_scale
    xv = (dataset.thetas[val_idx] - in_mean) / in_scale
    yv = (dataset.stats[val_idx] - out_mean) / out_scale

    dims = [dataset.p, *arch.hidden_widths, dataset.d]
    weights, biases = _init_layers(dims, rng)
    n_layers = len(weights)

    adam_m = [np.zeros_like(w) for w in weights] + [np.zeros_like(b) for b in biases]
    adam_v = [np.zeros_like(w) for w in weights] + [np.zeros_like(b) for b in biases]
    beta1, beta2, eps = 0.9, 0.999, 1e-8
    adam_t = 0

    def forward_eval(x):
        h = x
        for layer in range(n_layers):
            h = h @ weights[layer].T + biases[layer]
            if layer < n_layers - 1:
                h = _relu(h)
        return h

    def mse(pred, target) -> float:
        return float(np.mean((pred - target) ** 2))

    keep = 1.0 - arch.dropout_rate
    n_train = xs.shape[0]
    history_train = []
    history_val = []

    for epoch in range(1, cfg.epochs + 1):
        order = rng.permutation(n_train)
        for lo in range(0, n_train, cfg.batch_size):
            batch = order[lo:lo + cfg.batch_size]
            xb, yb = xs[batch], ys[batch]
            acts = [xb]
            masks = []
            h = xb
            for layer in range(n_layers):
                z = h @ weights[layer].T + biases[layer]
                if layer < n_layers - 1:
                    h = _relu(z)
                    if arch.dropout_rate > 0.0:
                        mask = (rng.random(h.shape) < keep) / keep
                        h = h * mask
                    else:
                        mask = None
                    masks.append(mask)
                    acts.append(h)
                else:
                    h = z
            pred = h
            grad_h = 2.0 * (pred - yb) / pred.size
            grads_w = [None] * n_layers
            grads_b = [None] * n_layers
            for layer in range(n_layers - 1, -1, -1):
                grads_w[layer] = grad_h.T @ acts[layer]
                grads_b[layer] = grad_h.sum(axis=0)
                if layer > 0:
                    grad_h = grad_h @ weights[layer]
                    if masks[layer - 1] is not None:
                        grad_h = grad_h * masks[layer - 1]
                    grad_h = grad_h * (acts[layer] > 0.0)

            adam_t += 1
            params = weights + biases
            grads = grads_w + grads_b
            corr1 = 1.0 - beta1 ** adam_t
            corr2 = 1.0 - beta2 ** adam_t
            for k in range(len(params)):
                adam_m[k] = beta1 * adam_m[k] + (1.0 - beta1) * grads[k]
                adam_v[k] = beta2 * adam_v[k] + (1.0 - beta2) * grads[k] ** 2
                params[k] -= cfg.learning_rate * (adam_m[k] / corr1) / (
                    np.sqrt(adam_v[k] / corr2) + eps
                )

        train_loss = mse(forward_eval(xs), ys)
        val_loss = mse(forward_eval(xv), yv)
        if not (np.isfinite(train_loss) and np.isfinite(val_loss)):
            raise TrainingDivergedError(
                f"diverged at epoch {epoch}; reduce learning rate"
            )
        history_train.append(train_loss)
        history_val.append(val_loss)

    model = SurrogateModel(
        weights=weights,
        biases=biases,
        arch=arch,
        in_mean=in_mean,
        in_scale=in_scale,
        out_mean=out_mean,
        out_scale=out_scale,
        history={"train_loss": history_train, "val_loss": history_val},
        dataset_fingerprint=dataset.fingerprint(),
        meta={
            "spec": dataset.metadata.get("spec"),
            "box": dataset.metadata.get("box"),
            "train": cfg.to_dict(),
            "dataset_L": L,
            "dataset_M": dataset.metadata.get("M"),
        },
    )
    bound = model.lipschitz_bound()
    assert np.isfinite(bound), "operator-norm bound must be finite"
    model.meta["diagnostics"] = {"lipschitz_bound": bound}
    return model


def validation_indices(L: int, cfg: TrainConfig) -> np.ndarray:
    """Recompute the validation rows produced by train() for this config."""
    rng = np.random.Generator(np.random.PCG64(cfg.seed))
    perm = rng.permutation(L)
    n_val = int(round(L * cfg.validation_fraction))
    n_val = min(max(n_val, 1), L - 1)
    return perm[:n_val]
