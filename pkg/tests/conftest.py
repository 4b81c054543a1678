import pytest
from hypothesis import strategies as st

from gradednets.io import load_net, load_poset
from gradednets.poset import Poset


def poset(name):
    return load_poset(name)[0]


def net(name):
    return load_net(name)[0]


@pytest.fixture
def chain():
    return poset("chain.json")


@pytest.fixture
def crown2():
    return poset("crown2.json")


@pytest.fixture
def cone():
    return poset("crown2_top.json")


@pytest.fixture
def bowtie():
    return poset("bowtie_tower.json")


@st.composite
def random_posets(draw, max_size=6, min_size=1):
    """Random posets on ``x0..x{n-1}``; pairs only go up in index, so no cycles."""
    n = draw(st.integers(min_size, max_size))
    labels = [f"x{i}" for i in range(n)]
    candidates = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(candidates), unique=True, max_size=len(candidates))
                  if candidates else st.just([]))
    return Poset(labels, [(labels[i], labels[j]) for i, j in chosen])
