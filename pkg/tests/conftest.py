"""Shared fixtures: a seeded synthetic dataset and models trained on it.

Session-scoped because dataset generation plus training costs a few seconds
and many modules assert against the same trained artifacts.
"""

import numpy as np
import pytest

from teleglove.nn import TrainConfig, quantize_int8, train
from teleglove.synth import build_dataset, features_and_labels

TRAIN_SEED = 7
TEST_SEED = 1007
MODEL_SEED = 3


@pytest.fixture(scope="session")
def train_set():
    X, y = features_and_labels(build_dataset(seed=TRAIN_SEED))
    return X, y


@pytest.fixture(scope="session")
def test_set():
    X, y = features_and_labels(build_dataset(per_class_ms=60_000, seed=TEST_SEED))
    return X, y


@pytest.fixture(scope="session")
def trained(train_set):
    X, y = train_set
    model, history = train(X, y, TrainConfig(seed=MODEL_SEED))
    return model, history


@pytest.fixture(scope="session")
def trained_model(trained):
    return trained[0]


@pytest.fixture(scope="session")
def quant_model(trained_model, train_set):
    X, _ = train_set
    return quantize_int8(trained_model, X)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(12345)
