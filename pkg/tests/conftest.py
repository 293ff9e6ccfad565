import random
import sys
from functools import lru_cache
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from cubefold.corpus import random_admissible_relation, random_pocset, random_resolution, resolution_corpus
from cubefold.folding import folding_sequence

settings.register_profile(
    "cubefold", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("cubefold")

FIXTURE_DIR = Path(__file__).resolve().parents[1] / "src" / "cubefold" / "fixtures"


def fixture_path(name: str) -> str:
    return str(FIXTURE_DIR / f"{name}.txt")


@pytest.fixture
def fixtures():
    return fixture_path


# Random instances are drawn through integer seeds so hypothesis can shrink
# them and every failure is reproducible from the printed seed.
seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def pocsets(draw, max_hyperplanes=8):
    seed = draw(seeds)
    n = draw(st.integers(min_value=1, max_value=max_hyperplanes))
    return random_pocset(random.Random(seed), n)


@st.composite
def relations(draw, max_hyperplanes=8):
    seed = draw(seeds)
    rng = random.Random(seed)
    p = random_pocset(rng, draw(st.integers(min_value=2, max_value=max_hyperplanes)))
    return random_admissible_relation(rng, p)


@st.composite
def resolutions(draw):
    seed = draw(seeds)
    m = draw(st.sampled_from((1, 2, 4)))
    return random_resolution(random.Random(seed), m)


@lru_cache(maxsize=None)
def folded_corpus(seed: int = 11, count: int = 40):
    """Verified traces of a fixed random corpus, shared across modules."""
    return tuple(folding_sequence(st_) for st_ in resolution_corpus(seed, count))


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    if acceptance is None or not acceptance.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for line in acceptance.summary_lines():
        terminalreporter.write_line(line)
