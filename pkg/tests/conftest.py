import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from anseq.core import AutomataNetwork

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@st.composite
def networks(draw, max_n=3, max_size=27, min_n=1):
    q = draw(st.integers(2, 3))
    n = draw(st.integers(min_n, max_n).filter(lambda n: q**n <= max_size))
    size = q**n
    table = draw(st.lists(st.integers(0, size - 1), min_size=size, max_size=size))
    return AutomataNetwork(n, q, table)


@st.composite
def network_with_order(draw, **kwargs):
    h = draw(networks(**kwargs))
    u = draw(st.permutations(list(range(1, h.n + 1))))
    return h, tuple(u)


@st.composite
def local_networks(draw, max_n=4):
    """Networks where each coordinate reads only a random subset of coordinates (sparse influence)."""
    n = draw(st.integers(1, max_n))
    q = 2
    reads = [draw(st.sets(st.integers(0, n - 1), max_size=2)) for _ in range(n)]
    rules = [draw(st.lists(st.integers(0, q - 1), min_size=q ** len(r), max_size=q ** len(r))) for r in reads]

    def fn(x):
        out = []
        for r, rule in zip(reads, rules):
            idx = 0
            for a, j in enumerate(sorted(r)):
                idx += x[j] * q**a
            out.append(rule[idx])
        return out

    return AutomataNetwork.from_function(n, q, fn)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_collection_modifyitems(config, items):
    if os.environ.get("ANSEQ_EXTENDED", "") not in ("", "0"):
        return
    skip = pytest.mark.skip(reason="extended run; set ANSEQ_EXTENDED=1")
    for item in items:
        if "extended" in item.keywords:
            item.add_marker(skip)
