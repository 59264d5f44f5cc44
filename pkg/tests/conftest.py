import random
from pathlib import Path

import pytest

from qmtl.cli import load_config
from qmtl.qm import OrientedEdge

PRESENTATIONS = Path(__file__).resolve().parent.parent / "presentations"


def load_space(name, fast=True):
    return load_config(str(PRESENTATIONS / f"{name}.json")).build(fast=fast)


def gp_edge(space, word, step):
    gp = space.gp
    tail = gp.parse(word)
    return OrientedEdge(tail, gp.mul(tail, gp.parse(step)))


def random_payload(spec, rng):
    if spec.kind == "integers":
        return rng.choice([-2, -1, 1, 2])
    return rng.choice([a for a in spec.elements() if not spec.is_identity(a)])


def random_word(gp, rng, max_len, min_len=0):
    """Random element assembled from between ``min_len`` and ``max_len`` raw letters."""
    raw = []
    for _ in range(rng.randint(min_len, max_len)):
        v = rng.randrange(len(gp.graph))
        raw.append((v, random_payload(gp.specs[v], rng)))
    return gp.reduce(raw)


def random_edge(space, rng, max_len=4):
    gp = space.gp
    x = random_word(gp, rng, max_len)
    v = rng.randrange(len(gp.graph))
    return OrientedEdge(x, gp.mul(x, gp.letter(v, random_payload(gp.specs[v], rng))))


@pytest.fixture(scope="session")
def dinf():
    return load_space("dinf")


@pytest.fixture(scope="session")
def f2():
    return load_space("f2")


@pytest.fixture(scope="session")
def path3():
    return load_space("raag_path3")


@pytest.fixture(scope="session")
def racg4():
    return load_space("racg_path4")


@pytest.fixture(scope="session")
def c4():
    return load_space("raag_c4")


@pytest.fixture(scope="session")
def mixed():
    return load_space("mixed_path3")


@pytest.fixture
def rng():
    return random.Random(20261016)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
