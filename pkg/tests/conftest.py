import json
import logging
import os
import sys

import numpy as np
import pytest

# Repository root on the path so tests import the package as `src`
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..'))

from src.phase import ph_validate

MARKERS = {
    "phase": "phase-type validation, evaluation and spectral form",
    "special": "special functions",
    "scaling": "scaling laws and reciprocal Laplace transforms",
    "mixture": "mixture tails, densities, moments and series bounds",
    "asymptotics": "tail classes, domains of attraction and diagnostics",
    "cli": "command line front end",
    "integration": "end-to-end flows through model files",
    "slow": "Monte Carlo cross-checks",
}


def pytest_configure(config):
    for name, text in MARKERS.items():
        config.addinivalue_line("markers", f"{name}: {text}")


def erlang(n, rate=1.0):
    Lambda = -rate * np.eye(n) + rate * np.eye(n, k=1)
    beta = np.zeros(n)
    beta[0] = 1.0
    return ph_validate(beta, Lambda)


@pytest.fixture
def exp_ph():
    return ph_validate([1.0], [[-1.0]])


@pytest.fixture
def erlang2():
    return erlang(2, 2.0)


@pytest.fixture
def erlang5():
    return erlang(5, 1.0)


@pytest.fixture
def hyperexp():
    """0.3 Exp(1) + 0.7 Exp(3)."""
    return ph_validate([0.3, 0.7], [[-1.0, 0.0], [0.0, -3.0]])


@pytest.fixture
def write_model(tmp_path):
    """Write a model document to a JSON file and return its path."""
    def write(document, name="model.json"):
        path = tmp_path / name
        path.write_text(json.dumps(document))
        return str(path)
    return write


@pytest.fixture
def restore_logging():
    """main() reconfigures the root logger; put the handlers back afterwards."""
    root = logging.getLogger()
    handlers, level = root.handlers[:], root.level
    yield
    for handler in root.handlers[:]:
        if handler not in handlers:
            root.removeHandler(handler)
            handler.close()
    for handler in handlers:
        if handler not in root.handlers:
            root.addHandler(handler)
    root.setLevel(level)
