import numpy as np
import pytest

from odeverify.systems import build_linear_decay, build_lorenz1990


def pytest_addoption(parser):
    parser.addoption(
        "--run-paper",
        action="store_true",
        default=False,
        help="run paper-scale experiments (minutes to tens of minutes)",
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--run-paper"):
        return
    skip = pytest.mark.skip(reason="paper-scale run; enable with --run-paper")
    for item in items:
        if "paper" in item.keywords:
            item.add_marker(skip)


@pytest.fixture(scope="session")
def decay():
    return build_linear_decay()


@pytest.fixture(scope="session")
def lorenz():
    return build_lorenz1990()


@pytest.fixture
def rng():
    return np.random.default_rng(20250809)
