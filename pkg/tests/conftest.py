"""Shared fixtures: the shipped data files and the weighting chain over them."""

from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "numeric", deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("numeric")

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def hierarchy():
    from hostrank.indicators import load_hierarchy

    return load_hierarchy(FIXTURES / "hierarchy.json")


@pytest.fixture(scope="session")
def judgments():
    from hostrank.dataio import load_judgments

    return load_judgments(FIXTURES / "judgments.json")


@pytest.fixture(scope="session")
def matrix(hierarchy):
    from hostrank.indicators import load_decision_matrix

    return load_decision_matrix(FIXTURES / "decision_matrix.csv", hierarchy)


@pytest.fixture(scope="session")
def weighting(hierarchy, judgments, matrix):
    from hostrank.pipeline import compute_weights

    return compute_weights(hierarchy, judgments, matrix)
