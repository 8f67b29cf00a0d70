from pathlib import Path

import numpy as np
import pytest

from hamfcm import load_dataset

DATA_DIR = Path(__file__).resolve().parents[1] / "data"
ARTIFACTS_DIR = Path(__file__).resolve().parents[1] / "artifacts"


@pytest.fixture(scope="session")
def iris():
    return load_dataset(DATA_DIR / "iris.csv", label_column="last")


@pytest.fixture(scope="session")
def wine():
    return load_dataset(DATA_DIR / "wine.csv", label_column="last")


@pytest.fixture(scope="session")
def card_image_path():
    return DATA_DIR / "card.png"


@pytest.fixture(scope="session")
def artifacts_dir():
    ARTIFACTS_DIR.mkdir(exist_ok=True)
    return ARTIFACTS_DIR


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)


def make_blobs(rng, n_per, centers, spread=0.4):
    """Labeled Gaussian blobs around the given centers."""
    centers = np.asarray(centers, dtype=float)
    parts, labels = [], []
    for k, center in enumerate(centers):
        parts.append(center + rng.normal(0.0, spread, (n_per, centers.shape[1])))
        labels.extend([k] * n_per)
    return np.vstack(parts), np.array(labels)
