import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ergofit.analytics import POSE_ORDER, CostVector, record_energy
from ergofit.avatar import Avatar
from ergofit.constraints import derive_constraints
from ergofit.generator import generate_corpus
from ergofit.reshaper import propagate

CORPUS_SEED = 2026
STYLE_POSE = {"office": "normal_sitting", "bench": "bench_sitting",
              "beach": "beach_lying", "bar": "bar_sitting"}


@pytest.fixture(scope="session")
def avatars():
    return {pose: Avatar.default(pose) for pose in POSE_ORDER}


@pytest.fixture(scope="session")
def corpus40():
    """The acceptance corpus: 10 chairs per style, fixed seed."""
    return generate_corpus(10, seed=CORPUS_SEED)


@pytest.fixture(scope="session")
def corpus_runs(corpus40, avatars):
    """Every (shape, pose) propagation, shared by the structural audits."""
    runs = {}
    for shape in corpus40:
        for pose, avatar in avatars.items():
            groups = derive_constraints(avatar, shape)
            deformed, record = propagate(shape, groups)
            runs[(shape.id, pose)] = (shape, groups, deformed, record)
    return runs


@pytest.fixture(scope="session")
def corpus_vectors(corpus40, corpus_runs):
    """Cost vectors assembled from the shared runs (same math as cost_vector)."""
    vectors = []
    for shape in corpus40:
        costs = []
        for pose in POSE_ORDER:
            _, _, _, record = corpus_runs[(shape.id, pose)]
            energy, _ = record_energy(shape, record)
            costs.append(energy)
        vectors.append(CostVector(shape.id, tuple(POSE_ORDER), tuple(costs)))
    return vectors
