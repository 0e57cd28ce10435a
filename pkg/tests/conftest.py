"""Shared fixtures and random generators for the test suite."""
from __future__ import annotations

import random
import sys

import pytest
from hypothesis import strategies as st

from ttkit.graph import Graph, rose, tighten
from ttkit.graphmap import GraphMap, compose, identity
from ttkit.scenarios import fibonacci, psi


@pytest.fixture(scope="session")
def psi_map() -> GraphMap:
    return psi()


@pytest.fixture(scope="session")
def fib_map() -> GraphMap:
    return fibonacci()


def elementary_positive(graph: Graph, i: int, j: int, right: bool) -> GraphMap:
    """``e_i -> e_i e_j`` (or ``e_j e_i``), the identity elsewhere."""
    e = graph.edges
    images = {h: (h,) for h in e}
    images[e[i]] = (e[i], e[j]) if right else (e[j], e[i])
    return GraphMap.from_images(graph, images)


def permutation(graph: Graph, perm) -> GraphMap:
    e = graph.edges
    return GraphMap.from_images(graph, {e[i]: (e[perm[i]],) for i in range(len(e))})


def random_positive_automorphism(rng: random.Random, rank: int, moves: int = 6) -> GraphMap:
    """Product of positive elementary moves and permutations on the rose.

    Positive maps create no illegal turns, so these are train track maps.
    """
    graph = rose(rank)
    g = identity(graph)
    for _ in range(moves):
        if rng.random() < 0.25:
            perm = list(range(rank))
            rng.shuffle(perm)
            step = permutation(graph, perm)
        else:
            i, j = rng.sample(range(rank), 2)
            step = elementary_positive(graph, i, j, rng.random() < 0.5)
        g = compose(step, g)
    return g


def random_word(rng: random.Random, graph: Graph, length: int) -> tuple[int, ...]:
    return tuple(rng.randrange(graph.num_half_edges) for _ in range(length))


def random_rose_map(rng: random.Random, rank: int, max_len: int = 4) -> GraphMap:
    """A random self-map of the rose; not necessarily a homotopy equivalence."""
    graph = rose(rank)
    images = {}
    for h in graph.edges:
        w = ()
        while not w:
            w = tighten(graph, random_word(rng, graph, rng.randint(1, max_len)))
        images[h] = w
    return GraphMap.from_images(graph, images)


@st.composite
def rose_words(draw, rank: int = 3, max_len: int = 30):
    graph = rose(rank)
    return graph, tuple(draw(st.lists(st.integers(0, graph.num_half_edges - 1), max_size=max_len)))


@st.composite
def positive_automorphisms(draw, max_rank: int = 3):
    seed = draw(st.integers(0, 2 ** 32 - 1))
    rank = draw(st.integers(2, max_rank))
    return random_positive_automorphism(random.Random(seed), rank, draw(st.integers(1, 8)))


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is not None and mod.LINES:
        terminalreporter.section("acceptance criteria")
        for line in mod.LINES:
            terminalreporter.write_line(line)
