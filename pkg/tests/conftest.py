import json
from pathlib import Path

import pytest

from pisotsub.core import parse_substitution

CORPUS_DIR = Path(__file__).resolve().parent.parent / "src" / "pisotsub" / "corpus"


def load_corpus(name):
    doc = json.loads((CORPUS_DIR / f"{name}.json").read_text())
    return parse_substitution(doc["substitution"])


@pytest.fixture(scope="session")
def corpus_dir():
    return CORPUS_DIR


@pytest.fixture(scope="session")
def fib():
    return load_corpus("fibonacci")


@pytest.fixture(scope="session")
def tm():
    return load_corpus("thue_morse")


@pytest.fixture(scope="session")
def pd():
    return load_corpus("period_doubling")


@pytest.fixture(scope="session")
def trib():
    return load_corpus("tribonacci")


@pytest.fixture(scope="session")
def intro():
    return load_corpus("asymptotic_cycle")


@pytest.fixture(scope="session")
def ninefold_base():
    return load_corpus("ninefold_base")


@pytest.fixture(scope="session")
def ninefold_cover():
    return load_corpus("ninefold_cover")


@pytest.fixture(scope="session")
def quadratic_base():
    return load_corpus("quadratic_base")


@pytest.fixture(scope="session")
def quadratic_cover():
    return load_corpus("quadratic_cover")


@pytest.fixture(scope="session")
def cubic_base():
    return load_corpus("cubic_base")


@pytest.fixture(scope="session")
def cubic_cover():
    return load_corpus("cubic_cover")


@pytest.fixture(scope="session")
def all_corpus_names():
    return sorted(p.stem for p in CORPUS_DIR.glob("*.json"))
