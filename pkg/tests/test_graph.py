import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import complete_graph, graph_from_pairs
from rigest.covering import covers
from rigest.errors import InvalidParameterError, ResourceLimitError
from rigest.graph import (
    AttributeAssignment,
    Graph,
    NodeSample,
    build_graph,
    generate,
    induced_subgraph,
    sample_nodes,
    segment_pairs,
)
from rigest.model import ModelParams


def assert_valid_graph(g):
    adj = g.adjacency_sets()
    for i in range(g.n):
        nb = g.neighbors(i)
        assert np.all(np.diff(nb) > 0), "neighbor lists sorted and duplicate-free"
        assert i not in adj[i]
        for j in adj[i]:
            assert i in adj[j]
    assert 2 * g.num_edges == int(g.degrees.sum())


# --- generate ---------------------------------------------------------------

def test_generate_p_zero_is_empty():
    a, g = generate(ModelParams(n=50, m=20, p=0.0), seed=3)
    assert a.members.size == 0
    assert g.num_edges == 0 and g.n == 50


def test_generate_p_one_is_complete():
    a, g = generate(ModelParams(n=4, m=2, p=1.0), seed=0)
    assert a.to_lists() == [[0, 1, 2, 3], [0, 1, 2, 3]]
    assert g == complete_graph(4)


def test_generate_reproducible():
    params = ModelParams(n=3000, m=2500, p=0.001)
    a1, g1 = generate(params, seed=42)
    a2, g2 = generate(params, seed=42)
    assert a1 == a2 and g1 == g2
    _, g3 = generate(params, seed=43)
    assert g3 != g1


def test_generate_assignment_invariants():
    a, g = generate(ModelParams(n=200, m=300, p=0.02), seed=5)
    for k in range(a.m):
        w = a.attribute(k)
        assert np.all(np.diff(w) > 0)
        assert w.size == 0 or (w.min() >= 0 and w.max() < a.n)
    # V_i consistent with W_k
    v = a.node_attributes()
    for k in range(a.m):
        for i in a.attribute(k):
            assert k in v[int(i)]
    assert sum(len(s) for s in v) == a.members.size
    assert_valid_graph(g)


def test_edge_budget_guard():
    with pytest.raises(ResourceLimitError):
        generate(ModelParams(n=2000, m=50, p=0.5), seed=0, edge_budget=10**6)


@pytest.mark.slow
def test_generate_mean_degree_matches_exact_edge_probability():
    # oracle: E deg = (n-1)(1 - (1-p^2)^m) ~ 8.95
    n, m, p = 1000, 1000, 0.003
    expected = (n - 1) * (1 - (1 - p * p) ** m)
    assert expected == pytest.approx(8.95, abs=0.01)
    means = [generate(ModelParams(n, m, p), seed=s)[1].degrees.mean() for s in range(200)]
    se = np.std(means, ddof=1) / math.sqrt(len(means))
    assert abs(np.mean(means) - expected) <= 3 * se


def test_attribute_sizes_are_binomial():
    # attribute sizes over many attributes: mean n p, variance n p (1-p)
    n, m, p = 50, 20000, 0.1
    a, _ = generate(ModelParams(n, m, p), seed=11)
    sizes = np.diff(a.indptr)
    assert sizes.mean() == pytest.approx(n * p, abs=4 * math.sqrt(n * p * (1 - p) / m))
    assert sizes.var() == pytest.approx(n * p * (1 - p), rel=0.05)


def test_subset_sampling_is_uniform_over_nodes():
    # each node owns a given attribute with probability p
    n, m, p = 20, 20000, 0.3
    a, _ = generate(ModelParams(n, m, p), seed=2)
    freq = np.bincount(a.members, minlength=n) / m
    se = math.sqrt(p * (1 - p) / m)
    assert np.all(np.abs(freq - p) <= 4.5 * se)


# --- build_graph ------------------------------------------------------------

@pytest.mark.parametrize(
    "lists, n, edges",
    [
        ([[1, 2]], 2, [(1, 2)]),
        ([[1, 2, 3]], 3, [(1, 2), (1, 3), (2, 3)]),
        ([[1, 2], [1, 2], [3]], 3, [(1, 2)]),
    ],
)
def test_build_graph_examples(lists, n, edges):
    a = AttributeAssignment.from_lists(n, [[i - 1 for i in w] for w in lists])
    assert build_graph(a) == graph_from_pairs(n, edges)


assignments = st.integers(1, 30).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.sets(st.integers(0, n - 1), max_size=n), max_size=12),
    )
)


@given(assignments)
def test_edges_iff_attribute_sets_intersect(data):
    n, lists = data
    a = AttributeAssignment.from_lists(n, [sorted(w) for w in lists])
    g = build_graph(a)
    v = a.node_attributes()
    for i, j in itertools.combinations(range(n), 2):
        assert g.has_edge(i, j) == bool(v[i] & v[j])
    assert_valid_graph(g)


@settings(max_examples=60)
@given(assignments, st.data())
def test_subgraph_containment_iff_attribute_cover(data, draw):
    # R subset of G  <=>  attribute member sets cover E(R)
    n, lists = data
    a = AttributeAssignment.from_lists(n, [sorted(w) for w in lists])
    g = build_graph(a)
    pairs = list(itertools.combinations(range(n), 2))
    if not pairs:
        return
    r_edges = draw.draw(st.lists(st.sampled_from(pairs), max_size=6, unique=True))
    inside = all(g.has_edge(i, j) for i, j in r_edges)
    assert inside == covers([set(w) for w in lists], r_edges)


@given(st.lists(st.integers(0, 6), max_size=8))
def test_segment_pairs_matches_itertools(lengths):
    values = np.arange(sum(lengths)) * 10
    indptr = np.concatenate([[0], np.cumsum(lengths)]).astype(np.int64)
    a, b = segment_pairs(indptr, values)
    expected = []
    for s in range(len(lengths)):
        seg = values[indptr[s] : indptr[s + 1]].tolist()
        expected.extend(itertools.combinations(seg, 2))
    assert list(zip(a.tolist(), b.tolist())) == expected


def test_graph_from_edges_dedups_and_drops_loops():
    g = Graph.from_edges(4, [(0, 1), (1, 0), (2, 2), (3, 1)])
    assert g.edge_list() == [(0, 1), (1, 3)]
    with pytest.raises(InvalidParameterError):
        Graph.from_edges(3, [(0, 3)])


def test_assignment_rejects_unsorted_members():
    with pytest.raises(InvalidParameterError):
        AttributeAssignment(n=3, m=1, indptr=np.array([0, 2]), members=np.array([2, 1]))
    with pytest.raises(InvalidParameterError):
        AttributeAssignment(n=3, m=1, indptr=np.array([0, 1]), members=np.array([3]))


# --- sampling ---------------------------------------------------------------

def test_sample_full():
    s = sample_nodes(10, 10, seed=123)
    assert s.nodes.tolist() == list(range(10))
    assert s.n0 == 10


def test_sample_deterministic():
    assert sample_nodes(10, 1, seed=9) == sample_nodes(10, 1, seed=9)
    assert sample_nodes(10, 1, seed=9).n0 == 1


def test_sample_invalid():
    with pytest.raises(InvalidParameterError):
        sample_nodes(10, 11, seed=0)
    with pytest.raises(InvalidParameterError):
        sample_nodes(10, 0, seed=0)


@pytest.mark.slow
def test_sample_inclusion_frequency_uniform():
    n, n0, reps = 1000, 500, 10_000
    counts = np.zeros(n)
    for s in range(reps):
        counts[sample_nodes(n, n0, seed=s).nodes] += 1
    freq = counts / reps
    # without-replacement inclusion is Bernoulli(0.5) per replicate
    se = math.sqrt(0.25 / reps)
    assert np.all(np.abs(freq - 0.5) <= 4.5 * se)  # max over 1000 nodes
    assert np.mean(np.abs(freq - 0.5) <= 3 * se) >= 0.99


def test_induced_subgraph_examples():
    tri = graph_from_pairs(3, [(1, 2), (1, 3), (2, 3)])
    sub, nodes = induced_subgraph(tri, NodeSample(np.array([0, 1])))
    assert sub == graph_from_pairs(2, [(1, 2)])
    assert nodes.tolist() == [0, 1]

    full, _ = induced_subgraph(tri, range(3))
    assert full == tri

    single, _ = induced_subgraph(tri, [2])
    assert single.n == 1 and single.num_edges == 0

    with pytest.raises(InvalidParameterError):
        induced_subgraph(tri, [0, 5])


def test_induced_subgraph_relabels_in_order():
    g = graph_from_pairs(6, [(1, 4), (4, 6), (2, 3), (5, 6)])
    sub, nodes = induced_subgraph(g, [5, 3, 0])
    assert nodes.tolist() == [0, 3, 5]
    assert sub.edge_list() == [(0, 1), (1, 2)]


@given(st.integers(2, 25), st.integers(0, 2**32 - 1), st.data())
def test_induced_subgraph_keeps_exactly_internal_edges(n, seed, data):
    rng = np.random.default_rng(seed)
    pairs = [(i, j) for i, j in itertools.combinations(range(n), 2) if rng.random() < 0.3]
    g = Graph.from_edges(n, pairs)
    chosen = sorted(data.draw(st.sets(st.integers(0, n - 1), min_size=1)))
    sub, nodes = induced_subgraph(g, chosen)
    expected = {(chosen.index(i), chosen.index(j)) for i, j in pairs if i in chosen and j in chosen}
    assert set(sub.edge_list()) == expected
    assert_valid_graph(sub)
