"""Degree moments, edge / 2-star / triangle counts and transitivity.

The fast paths touch only degrees (edges, 2-stars) or forward adjacency
lists (triangles).  :func:`brute_force_census` is an exhaustive oracle for
small graphs.
"""

from __future__ import annotations

import itertools
from collections import Counter
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from .catalog import Motif, get_motif
from .errors import CapExceededError, InvalidParameterError
from .graph import Graph, segment_pairs

__all__ = [
    "MotifCounts",
    "DegreeMoments",
    "degree_moments",
    "count_pairs_and_stars",
    "count_triangles",
    "transitivity",
    "brute_force_census",
    "contains_on_fixed_vertices",
    "op_counter",
    "DEFAULT_CENSUS_CAP",
]

DEFAULT_CENSUS_CAP = 100

# Instrumentation: "triangle_calls" and "wedge_checks" are bumped by
# count_triangles.  Reset with op_counter.clear().
op_counter: Counter[str] = Counter()


@dataclass(frozen=True)
class MotifCounts:
    n_k2: int
    n_s2: int
    n_k3: int | None = None


@dataclass(frozen=True)
class DegreeMoments:
    a1: float
    a2: float
    d_max: int
    n0: int


def _degree_sums(g: Graph) -> tuple[int, int]:
    deg = g.degrees.astype(np.int64)
    return int(deg.sum()), int((deg * deg).sum())


def degree_moments(g: Graph) -> DegreeMoments:
    if g.n < 1:
        raise InvalidParameterError("graph must have at least one node")
    s1, s2 = _degree_sums(g)
    d_max = int(g.degrees.max()) if g.n else 0
    return DegreeMoments(a1=s1 / g.n, a2=s2 / g.n, d_max=d_max, n0=g.n)


def count_pairs_and_stars(g: Graph) -> MotifCounts:
    """Edge and 2-star counts from the degree sequence alone."""
    s1, s2 = _degree_sums(g)
    return MotifCounts(n_k2=s1 // 2, n_s2=(s2 - s1) // 2)


def count_triangles(g: Graph, chunk_pairs: int = 1 << 22) -> int:
    """Exact triangle count by degree-ordered forward listing.

    Edges are oriented from lower to higher (degree, id) rank.  Every
    triangle is found once, from its lowest-ranked vertex, as a pair of that
    vertex's forward neighbours joined by an edge.  The number of such pairs
    checked is at most ``sum(deg) * d_max / 2``.
    """
    op_counter["triangle_calls"] += 1
    if g.num_edges < 3:
        return 0
    n = g.n
    rank = np.empty(n, dtype=np.int64)
    rank[np.lexsort((np.arange(n), g.degrees))] = np.arange(n)
    u, v = g.edges()
    edge_keys = u * n + v  # sorted, since edges() is lexicographic
    flip = rank[u] > rank[v]
    src = np.where(flip, v, u)
    dst = np.where(flip, u, v)
    order = np.lexsort((dst, src))
    src, dst = src[order], dst[order]
    fwd_ptr = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=n), out=fwd_ptr[1:])
    fwd_deg = np.diff(fwd_ptr)
    pairs_per_node = fwd_deg * (fwd_deg - 1) // 2

    total = 0
    checks = 0
    start = 0
    cum = np.cumsum(pairs_per_node)
    while start < n:
        # nodes [start, stop) generate at most chunk_pairs wedges (or one node)
        limit = (cum[start - 1] if start else 0) + chunk_pairs
        stop = max(start + 1, int(np.searchsorted(cum, limit, side="right")))
        stop = min(stop, n)
        a, b = segment_pairs(fwd_ptr[start : stop + 1], dst)
        if a.size:
            lo = np.minimum(a, b)
            hi = np.maximum(a, b)
            keys = lo * n + hi
            pos = np.searchsorted(edge_keys, keys)
            pos[pos == edge_keys.size] = 0
            total += int(np.count_nonzero(edge_keys[pos] == keys))
            checks += int(a.size)
        start = stop
    op_counter["wedge_checks"] += checks
    return total


def transitivity(g: Graph, counts: MotifCounts | None = None) -> float | None:
    """``3 N_K3 / N_S2``, or None when the graph has no 2-star."""
    if counts is None or counts.n_k3 is None:
        base = count_pairs_and_stars(g)
        counts = MotifCounts(base.n_k2, base.n_s2, count_triangles(g))
    if counts.n_s2 == 0:
        return None
    return 3 * counts.n_k3 / counts.n_s2


def _embeddings(adj: list[set[int]], motif: Motif, nodes: Sequence[int]) -> int:
    """Injective maps of motif vertices into ``nodes`` preserving every motif edge."""
    count = 0
    edges = [(i - 1, j - 1) for i, j in motif.edges]
    for combo in itertools.combinations(nodes, motif.n_vertices):
        for perm in itertools.permutations(combo):
            if all(perm[j] in adj[perm[i]] for i, j in edges):
                count += 1
    return count


def brute_force_census(
    g: Graph, motif: Motif | str, cap: int = DEFAULT_CENSUS_CAP
) -> int:
    """Number of subgraphs of ``g`` isomorphic to ``motif``, by exhaustive search.

    Counts labelled embeddings over all vertex tuples and divides by the
    motif's automorphism count.  Intended as a test oracle only.
    """
    motif = get_motif(motif)
    if g.n > cap:
        raise CapExceededError(f"census is capped at {cap} nodes, graph has {g.n}")
    embeddings = _embeddings(g.adjacency_sets(), motif, range(g.n))
    return embeddings // motif.automorphisms


def contains_on_fixed_vertices(g: Graph, motif: Motif | str, vertex_map: Sequence[int]) -> bool:
    """Whether motif vertex ``k`` -> ``vertex_map[k-1]`` maps every motif edge onto an edge."""
    motif = get_motif(motif)
    vm = [int(x) for x in vertex_map]
    if len(vm) != motif.n_vertices:
        raise InvalidParameterError(
            f"{motif.name} has {motif.n_vertices} vertices, map has {len(vm)} entries"
        )
    if len(set(vm)) != len(vm) or any(not 0 <= x < g.n for x in vm):
        raise InvalidParameterError("vertex map entries must be distinct node ids of the graph")
    return all(g.has_edge(vm[i - 1], vm[j - 1]) for i, j in motif.edges)
