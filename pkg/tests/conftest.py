"""
Pytest configuration for cows-adapt tests
"""

import logging
import os
import sys
from pathlib import Path

import pytest

# Add src/python to Python path for imports
sys.path.insert(0, os.path.join(os.path.dirname(__file__), '..', 'src', 'python'))

from cows_adapt.explorer import explore  # noqa: E402
from cows_adapt.scenario import TollboothParams, build_tollbooth  # noqa: E402
from cows_adapt.syntax import parse_model  # noqa: E402

REPO_ROOT = Path(__file__).resolve().parent.parent
CORPUS = REPO_ROOT / "corpus"
GOLDEN = Path(__file__).resolve().parent / "fixtures" / "golden"


@pytest.fixture(scope="session")
def corpus_dir():
    return CORPUS


@pytest.fixture(scope="session")
def golden_dir():
    return GOLDEN


@pytest.fixture(scope="session")
def tollbooth_source():
    """Text of the shipped tollbooth model"""
    return (CORPUS / "tollbooth.cows").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def tollbooth_model(tollbooth_source):
    return parse_model(tollbooth_source)


@pytest.fixture(scope="session")
def tollbooth_lts(tollbooth_model):
    return explore(tollbooth_model, max_states=10_000)


@pytest.fixture(scope="session")
def late_adaptation_lts():
    """Adaptation estimate above its deadline"""
    return explore(build_tollbooth(TollboothParams(adapt_estimate=5)), max_states=10_000)


@pytest.fixture(scope="session")
def slow_execution_lts():
    """Execution estimate above its bound"""
    return explore(build_tollbooth(TollboothParams(exec_estimate=70)), max_states=10_000)


@pytest.fixture(autouse=True)
def _isolated_environment(monkeypatch):
    """Keep a developer's COWS_ADAPT_* variables out of the tests"""
    for name in list(os.environ):
        if name.startswith("COWS_ADAPT_"):
            monkeypatch.delenv(name, raising=False)


@pytest.fixture(autouse=True)
def _reset_package_logger():
    """Drop handlers a command-line run attached to its captured streams"""
    logger = logging.getLogger("cows_adapt")
    level = logger.level
    yield
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()
    logger.setLevel(level)
