import numpy as np
import pytest

from revlsi import corpus
from revlsi.density import GaussianSpec, MixtureSpec


@pytest.fixture(scope="session")
def corpus42():
    return corpus.generate(corpus.CorpusSpec(seed=42, count=100))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def bimodal():
    """Equal-weight mixture of unit-variance Gaussians at -2 and +2."""
    return MixtureSpec([0.5, 0.5], (GaussianSpec([-2.0], [[1.0]]), GaussianSpec([2.0], [[1.0]])))


def random_gaussian(rng, n):
    a = rng.normal(size=(n, n))
    cov = a @ a.T + 0.3 * np.eye(n)
    return GaussianSpec(rng.uniform(-1, 1, size=n), cov)


ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number: int, ok: bool, detail: str) -> None:
    line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    print(line)
    ACCEPTANCE_LINES.append(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
