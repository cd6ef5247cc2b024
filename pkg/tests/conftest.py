from __future__ import annotations

from functools import lru_cache

import networkx as nx
import pytest
from networkx.generators.atlas import graph_atlas_g

from kvisloc.graph import Graph, from_networkx


@lru_cache(maxsize=None)
def connected_graphs(max_n: int) -> tuple[Graph, ...]:
    """Every connected graph on 1..max_n vertices (max_n <= 7), up to isomorphism."""
    return tuple(
        from_networkx(h) for h in graph_atlas_g()[1:] if h.number_of_nodes() <= max_n and nx.is_connected(h)
    )


@lru_cache(maxsize=None)
def trees_up_to(max_n: int) -> tuple[Graph, ...]:
    out = [Graph(1, ())]
    for n in range(2, max_n + 1):
        out.extend(from_networkx(t) for t in nx.nonisomorphic_trees(n))
    return tuple(out)


def random_tree(n: int, seed: int) -> Graph:
    return from_networkx(nx.random_labeled_tree(n, seed=seed))


def mask(*vs: int) -> int:
    out = 0
    for v in vs:
        out |= 1 << v
    return out


@pytest.fixture
def atlas7():
    return connected_graphs(7)


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", help="run exhaustive sweeps marked slow")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="exhaustive sweep; use --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)
