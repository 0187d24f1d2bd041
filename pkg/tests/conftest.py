from __future__ import annotations

import random
from pathlib import Path

import pytest

from beliefcase import Document, Opinion, load_document

DATA_DIR = Path(__file__).parent / "data"
CORPUS = DATA_DIR / "hazard_argument.yaml"


@pytest.fixture(scope="session")
def corpus_path() -> Path:
    return CORPUS


@pytest.fixture(scope="session")
def corpus_document() -> Document:
    return load_document(str(CORPUS))


def random_opinion(rng: random.Random, min_u: float = 0.0,
                   base_rate: float | None = None) -> Opinion:
    """Uniform draw from the simplex, optionally bounded away from dogmatic."""
    while True:
        b = rng.random()
        d = rng.random() * (1.0 - b)
        u = 1.0 - b - d
        if u >= min_u:
            break
    a = rng.random() if base_rate is None else base_rate
    return Opinion(b, d, u, a)


def assert_opinion_close(actual: Opinion, expected: Opinion, tol: float = 1e-9) -> None:
    assert actual.b == pytest.approx(expected.b, abs=tol)
    assert actual.d == pytest.approx(expected.d, abs=tol)
    assert actual.u == pytest.approx(expected.u, abs=tol)
    assert actual.a == pytest.approx(expected.a, abs=tol)


def assert_valid(o: Opinion, tol: float = 1e-9) -> None:
    for name in ("b", "d", "u", "a"):
        value = getattr(o, name)
        assert -tol <= value <= 1.0 + tol, f"{name}={value!r} outside [0, 1]"
    assert abs(o.b + o.d + o.u - 1.0) <= tol
