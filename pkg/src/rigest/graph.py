"""Random intersection graph generation, representation and induced sampling.

Node and attribute ids are 0-based in memory; the text formats in
:mod:`rigest.io` use 1-based ids.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, ResourceLimitError
from .model import ModelParams

__all__ = [
    "AttributeAssignment",
    "Graph",
    "NodeSample",
    "generate",
    "generate_assignment",
    "build_graph",
    "sample_nodes",
    "induced_subgraph",
    "segment_pairs",
    "DEFAULT_EDGE_BUDGET",
    "ATTRIBUTE_BLOCK",
]

DEFAULT_EDGE_BUDGET = 10**8
# attributes per random substream; part of the reproducibility contract
ATTRIBUTE_BLOCK = 1024


def segment_pairs(indptr: np.ndarray, values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """All pairs ``(values[i], values[j])`` with ``i < j`` inside each segment.

    Segment ``s`` is ``values[indptr[s]:indptr[s+1]]``.  Fully vectorised.
    """
    indptr = np.asarray(indptr, dtype=np.int64)
    lengths = np.diff(indptr)
    total_len = int(indptr[-1] - indptr[0])
    if total_len == 0:
        empty = np.empty(0, dtype=np.int64)
        return empty, empty
    base = int(indptr[0])
    pos = np.arange(total_len, dtype=np.int64) - np.repeat(indptr[:-1] - base, lengths)
    partners = np.repeat(lengths, lengths) - 1 - pos
    n_pairs = int(partners.sum())
    first = np.repeat(np.arange(total_len, dtype=np.int64), partners)
    offset = np.arange(n_pairs, dtype=np.int64) - np.repeat(np.cumsum(partners) - partners, partners)
    second = first + offset + 1
    vals = np.asarray(values)[base : base + total_len]
    return vals[first], vals[second]


@dataclass(frozen=True, eq=False)
class AttributeAssignment:
    """Members of every attribute, in CSR layout.

    ``members[indptr[k]:indptr[k+1]]`` is the strictly increasing list of
    nodes owning attribute ``k``.
    """

    n: int
    m: int
    indptr: np.ndarray
    members: np.ndarray

    def __post_init__(self) -> None:
        if len(self.indptr) != self.m + 1:
            raise InvalidParameterError("indptr must have m + 1 entries")
        if self.members.size:
            if self.members.min() < 0 or self.members.max() >= self.n:
                raise InvalidParameterError("attribute member out of range")
            owner = np.repeat(np.arange(self.m), np.diff(self.indptr))
            same = owner[1:] == owner[:-1]
            if np.any(np.diff(self.members)[same] <= 0):
                raise InvalidParameterError("attribute members must be strictly increasing")

    @classmethod
    def from_lists(cls, n: int, lists: Sequence[Iterable[int]]) -> "AttributeAssignment":
        rows = [np.unique(np.asarray(list(w), dtype=np.int64)) for w in lists]
        sizes = np.array([r.size for r in rows], dtype=np.int64)
        indptr = np.concatenate([[0], np.cumsum(sizes)]).astype(np.int64)
        members = np.concatenate(rows).astype(np.int64) if rows else np.empty(0, np.int64)
        return cls(n=n, m=len(rows), indptr=indptr, members=members)

    def attribute(self, k: int) -> np.ndarray:
        return self.members[self.indptr[k] : self.indptr[k + 1]]

    def to_lists(self) -> list[list[int]]:
        return [self.attribute(k).tolist() for k in range(self.m)]

    def node_attributes(self) -> list[set[int]]:
        """Per-node attribute sets ``V_i``."""
        out: list[set[int]] = [set() for _ in range(self.n)]
        for k in range(self.m):
            for i in self.attribute(k):
                out[int(i)].add(k)
        return out

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AttributeAssignment):
            return NotImplemented
        return (
            self.n == other.n
            and self.m == other.m
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.members, other.members)
        )


class Graph:
    """Undirected simple graph on nodes ``0..n-1`` stored as sorted CSR adjacency."""

    __slots__ = ("n", "indptr", "indices", "degrees")

    def __init__(self, n: int, indptr: np.ndarray, indices: np.ndarray):
        self.n = int(n)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        self.degrees = np.diff(self.indptr)

    @classmethod
    def from_edges(cls, n: int, u: Iterable[int], v: Iterable[int] | None = None) -> "Graph":
        """Build from endpoint arrays (or an iterable of pairs when ``v`` is None).

        Self-loops are dropped and parallel edges merged.
        """
        if v is None:
            pairs = np.asarray(list(u), dtype=np.int64).reshape(-1, 2)
            u_arr, v_arr = pairs[:, 0], pairs[:, 1]
        else:
            u_arr = np.asarray(u, dtype=np.int64)
            v_arr = np.asarray(v, dtype=np.int64)
        if u_arr.size and (min(u_arr.min(), v_arr.min()) < 0 or max(u_arr.max(), v_arr.max()) >= n):
            raise InvalidParameterError(f"edge endpoint outside 0..{n - 1}")
        lo = np.minimum(u_arr, v_arr)
        hi = np.maximum(u_arr, v_arr)
        keep = lo != hi
        keys = np.unique(lo[keep] * n + hi[keep])
        lo, hi = keys // n, keys % n
        src = np.concatenate([lo, hi])
        dst = np.concatenate([hi, lo])
        order = np.lexsort((dst, src))
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(src, minlength=n), out=indptr[1:])
        return cls(n, indptr, dst[order])

    @classmethod
    def empty(cls, n: int) -> "Graph":
        return cls(n, np.zeros(n + 1, dtype=np.int64), np.empty(0, dtype=np.int64))

    @property
    def num_edges(self) -> int:
        return int(self.indices.size // 2)

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i] : self.indptr[i + 1]]

    def has_edge(self, i: int, j: int) -> bool:
        nb = self.neighbors(i)
        k = np.searchsorted(nb, j)
        return bool(k < nb.size and nb[k] == j)

    def edges(self) -> tuple[np.ndarray, np.ndarray]:
        """Endpoint arrays ``(u, v)`` with ``u < v``, in lexicographic order."""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = src < self.indices
        return src[keep], self.indices[keep]

    def edge_list(self) -> list[tuple[int, int]]:
        u, v = self.edges()
        return list(zip(u.tolist(), v.tolist()))

    def adjacency_sets(self) -> list[set[int]]:
        return [set(self.neighbors(i).tolist()) for i in range(self.n)]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.n == other.n
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.num_edges})"


def _block_rng(seed: int, block: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(block,)))


def _sample_subsets(rng: np.random.Generator, n: int, sizes: np.ndarray) -> np.ndarray:
    """Uniform ``sizes[k]``-subsets of ``0..n-1``, concatenated and sorted per subset.

    Small subsets are drawn with replacement and duplicates redrawn until
    none remain; the procedure commutes with relabelling of ``0..n-1``, so
    each subset is uniform.  Large subsets fall back to ``Generator.choice``.
    """
    sizes = np.asarray(sizes, dtype=np.int64)
    large = sizes * 4 > n
    owner = np.repeat(np.arange(sizes.size), sizes)
    vals = np.empty(owner.size, dtype=np.int64)

    small_pos = np.flatnonzero(~large[owner]) if owner.size else np.empty(0, np.int64)
    vals[small_pos] = rng.integers(0, n, size=small_pos.size)
    while small_pos.size:
        sub_owner = owner[small_pos]
        sub_vals = vals[small_pos]
        order = np.lexsort((sub_vals, sub_owner))
        so, sv = sub_owner[order], sub_vals[order]
        dup = np.zeros(order.size, dtype=bool)
        dup[1:] = (so[1:] == so[:-1]) & (sv[1:] == sv[:-1])
        redo = small_pos[order[dup]]
        if redo.size == 0:
            break
        vals[np.sort(redo)] = rng.integers(0, n, size=redo.size)

    starts = np.concatenate([[0], np.cumsum(sizes)])
    for k in np.flatnonzero(large):
        vals[starts[k] : starts[k + 1]] = rng.choice(n, size=int(sizes[k]), replace=False)

    order = np.lexsort((vals, owner))
    return vals[order]


def generate_assignment(
    params: ModelParams, seed: int, edge_budget: int = DEFAULT_EDGE_BUDGET
) -> AttributeAssignment:
    """Draw the random attribute assignment of G(n, m, p).

    Attribute-major: for each attribute the number of owners is
    Binomial(n, p) and the owners are a uniform subset of that size.
    Attributes are processed in blocks of :data:`ATTRIBUTE_BLOCK`; block
    ``b`` draws from ``SeedSequence(seed, spawn_key=(b,))``.
    """
    n, m, p = params.n, params.m, params.p
    if seed < 0:
        raise InvalidParameterError("seed must be non-negative")
    all_sizes = []
    chunks = []
    slots = 0
    for block, start in enumerate(range(0, m, ATTRIBUTE_BLOCK)):
        count = min(ATTRIBUTE_BLOCK, m - start)
        rng = _block_rng(seed, block)
        sizes = rng.binomial(n, p, size=count).astype(np.int64)
        slots += int(np.sum(sizes * sizes))
        if slots > edge_budget:
            raise ResourceLimitError(
                f"attribute cliques need more than {edge_budget} edge slots; "
                "parameters are far outside the sparse regime"
            )
        all_sizes.append(sizes)
        chunks.append(_sample_subsets(rng, n, sizes))
    sizes = np.concatenate(all_sizes)
    indptr = np.zeros(m + 1, dtype=np.int64)
    np.cumsum(sizes, out=indptr[1:])
    return AttributeAssignment(n=n, m=m, indptr=indptr, members=np.concatenate(chunks))


def build_graph(a: AttributeAssignment) -> Graph:
    """Intersection graph: nodes sharing at least one attribute are adjacent."""
    u, v = segment_pairs(a.indptr, a.members)
    return Graph.from_edges(a.n, u, v)


def generate(
    params: ModelParams, seed: int, edge_budget: int = DEFAULT_EDGE_BUDGET
) -> tuple[AttributeAssignment, Graph]:
    assignment = generate_assignment(params, seed, edge_budget)
    return assignment, build_graph(assignment)


@dataclass(frozen=True, eq=False)
class NodeSample:
    """Sorted, duplicate-free node ids drawn from ``0..n-1``."""

    nodes: np.ndarray

    @property
    def n0(self) -> int:
        return int(self.nodes.size)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, NodeSample):
            return NotImplemented
        return np.array_equal(self.nodes, other.nodes)


def sample_nodes(n: int, n0: int, seed: int | np.random.SeedSequence) -> NodeSample:
    """Uniform random ``n0``-subset of ``0..n-1``, independent of any graph."""
    if not (1 <= n0 <= n):
        raise InvalidParameterError(f"need 1 <= n0 <= n, got n0={n0}, n={n}")
    rng = np.random.default_rng(seed)
    return NodeSample(np.sort(rng.choice(n, size=n0, replace=False)).astype(np.int64))


def induced_subgraph(g: Graph, sample: NodeSample | Iterable[int]) -> tuple[Graph, np.ndarray]:
    """Subgraph induced by the sampled nodes, relabelled ``0..n0-1`` in id order.

    Returns the subgraph and the array mapping new ids to original ids.
    """
    nodes = sample.nodes if isinstance(sample, NodeSample) else np.asarray(list(sample), dtype=np.int64)
    nodes = np.asarray(nodes, dtype=np.int64)
    if nodes.size and (nodes.min() < 0 or nodes.max() >= g.n):
        raise InvalidParameterError(f"sampled node outside 0..{g.n - 1}")
    nodes = np.unique(nodes)
    new_id = np.full(g.n, -1, dtype=np.int64)
    new_id[nodes] = np.arange(nodes.size)
    u, v = g.edges()
    keep = (new_id[u] >= 0) & (new_id[v] >= 0)
    return Graph.from_edges(nodes.size, new_id[u[keep]], new_id[v[keep]]), nodes
