import sys
from pathlib import Path

import pytest
from hypothesis import settings, strategies as st

from esakia_forge.poset import FinitePoset

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def posets(draw, min_size=1, max_size=5):
    """Random posets: a random relation on index pairs i < j, closed transitively,
    then relabelled by a random permutation."""
    n = draw(st.integers(min_size, max_size))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    perm = draw(st.permutations(range(n)))
    names = [f"e{perm[i]}" for i in range(n)]
    return FinitePoset.from_relation(names, [(names[i], names[j]) for i, j in chosen])


@pytest.fixture
def chain2():
    return FinitePoset.chain(2)


@pytest.fixture
def vee():
    """c below both a and b."""
    return FinitePoset.from_relation("abc", [("c", "a"), ("c", "b")], sort=True)


@pytest.fixture
def wedge():
    """a and b below c."""
    return FinitePoset.from_relation("abc", [("a", "c"), ("b", "c")], sort=True)


def pytest_terminal_summary(terminalreporter):
    acceptance = sys.modules.get("test_acceptance")
    results = getattr(acceptance, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
