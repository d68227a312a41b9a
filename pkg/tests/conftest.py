import itertools
import random

import numpy as np
import pytest

from rigest.graph import Graph


def graph_from_pairs(n, pairs):
    """Graph from 1-based pairs, as written in hand examples."""
    return Graph.from_edges(n, [(i - 1, j - 1) for i, j in pairs])


def complete_graph(n):
    return Graph.from_edges(n, list(itertools.combinations(range(n), 2)))


def path_graph(n):
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n):
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves):
    return Graph.from_edges(leaves + 1, [(0, j) for j in range(1, leaves + 1)])


# --- independent oracles: plain Python over adjacency sets, no package code ---

def oracle_adjacency(n, pairs):
    adj = [set() for _ in range(n)]
    for i, j in pairs:
        if i != j:
            adj[i].add(j)
            adj[j].add(i)
    return adj


def oracle_counts(adj):
    """(edges, 2-stars, triangles) by scanning all pairs and triples."""
    n = len(adj)
    edges = sum(1 for i, j in itertools.combinations(range(n), 2) if j in adj[i])
    stars = 0
    triangles = 0
    for a, b, c in itertools.combinations(range(n), 3):
        e = (b in adj[a]) + (c in adj[a]) + (c in adj[b])
        if e == 3:
            triangles += 1
            stars += 3
        elif e == 2:
            stars += 1
    return edges, stars, triangles


def random_intersection_pairs(rng, n, m, p):
    """Edges of G(n, m, p) via the naive n x m Bernoulli matrix."""
    b = rng.random((n, m)) < p
    pairs = []
    for i, j in itertools.combinations(range(n), 2):
        if np.any(b[i] & b[j]):
            pairs.append((i, j))
    return pairs


def random_uniform_pairs(rng, n, q):
    return [(i, j) for i, j in itertools.combinations(range(n), 2) if rng.random() < q]


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def py_random():
    return random.Random(7)


# --- acceptance verdict collection ------------------------------------------

_VERDICTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_VERDICTS] = []


@pytest.fixture
def verdict(request, capsys):
    """Record and print a one-line PASS/FAIL verdict for an acceptance criterion."""

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        request.config.stash[_VERDICTS].append((number, line))
        with capsys.disabled():
            print("\n" + line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter, config):
    verdicts = config.stash.get(_VERDICTS, [])
    if verdicts:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(verdicts):
            terminalreporter.write_line(line)
