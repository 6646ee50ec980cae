import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from helpers import CORPUS, load_corpus_file  # noqa: E402


@pytest.fixture(scope="session")
def corpus_dir() -> Path:
    return CORPUS


@pytest.fixture(scope="session")
def car_ontology():
    return load_corpus_file("car_diagnosis.oks")


@pytest.fixture(scope="session")
def calibration_ontology():
    return load_corpus_file("calibration.oks")
