"""Session fixtures: one small trained ER surrogate shared across modules."""

import pytest

from nnergm.statistics import Edges, ModelSpec
from nnergm.surrogate import (
    ArchConfig,
    PriorBox,
    TrainConfig,
    generate_training_set,
    train,
)


@pytest.fixture(scope="session")
def er10_spec():
    return ModelSpec(10, False, (Edges(),))


@pytest.fixture(scope="session")
def er10_box():
    return PriorBox((-4.0,), (4.0,))


@pytest.fixture(scope="session")
def er10_dataset(er10_spec, er10_box):
    return generate_training_set(
        er10_spec,
        er10_box,
        L=400,
        M=150,
        master_seed=21,
        timestamp="2026-01-01T00:00:00+00:00",
    )


@pytest.fixture(scope="session")
def er10_model(er10_dataset):
    return train(er10_dataset, ArchConfig(), TrainConfig(epochs=200, seed=3))


@pytest.fixture(scope="session")
def er10_files(tmp_path_factory, er10_dataset, er10_model):
    """The fixture bundle saved to disk, for CLI-level tests."""
    root = tmp_path_factory.mktemp("er10-artifacts")
    data = root / "er10.csv"
    model = root / "er10-model.json"
    er10_dataset.save(str(data))
    er10_model.save(str(model))
    return {"dataset": str(data), "model": str(model)}
