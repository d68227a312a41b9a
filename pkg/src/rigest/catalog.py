"""Catalog of the small motifs whose covering densities are tabulated.

Vertices are labelled ``1..v``; edges are sorted pairs ``(i, j)`` with
``i < j``.  Stars are centred at vertex 1.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

from .errors import UnknownMotifError

__all__ = ["Motif", "CATALOG", "MOTIF_NAMES", "get_motif", "star"]


@dataclass(frozen=True)
class Motif:
    name: str
    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    @property
    def vertices(self) -> tuple[int, ...]:
        return tuple(range(1, self.n_vertices + 1))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @cached_property
    def automorphisms(self) -> int:
        """Size of the automorphism group, by brute force over vertex permutations."""
        edge_set = set(self.edges)
        count = 0
        for perm in itertools.permutations(self.vertices):
            image = {tuple(sorted((perm[i - 1], perm[j - 1]))) for i, j in self.edges}
            if image == edge_set:
                count += 1
        return count


def _motif(name: str, v: int, edges: str) -> Motif:
    pairs = tuple(sorted(tuple(sorted((int(e[0]), int(e[1])))) for e in edges.split()))
    return Motif(name, v, pairs)


def star(r: int) -> Motif:
    """The r-star: centre 1 joined to leaves 2..r+1."""
    return Motif(f"{r}-star", r + 1, tuple((1, j) for j in range(2, r + 2)))


CATALOG: dict[str, Motif] = {
    m.name: m
    for m in [
        star(1),
        star(2),
        _motif("3-cycle", 3, "12 13 23"),
        star(3),
        _motif("3-path", 4, "12 23 34"),
        _motif("4-cycle", 4, "12 23 34 14"),
        _motif("3-pan", 4, "12 13 23 34"),
        _motif("diamond", 4, "12 13 14 23 24"),
        star(4),
        _motif("4-path", 5, "12 23 34 45"),
        _motif("chair", 5, "12 23 25 34"),
        _motif("butterfly", 5, "12 13 23 34 35 45"),
    ]
}

MOTIF_NAMES: tuple[str, ...] = tuple(CATALOG)

_ALIASES = {
    "edge": "1-star",
    "triangle": "3-cycle",
    "k3": "3-cycle",
    "k2": "1-star",
    "s2": "2-star",
    "wedge": "2-star",
    "fork": "chair",
    "paw": "3-pan",
    "bowtie": "butterfly",
}


def get_motif(motif: Motif | str) -> Motif:
    """Resolve a motif name (case-insensitive, common aliases accepted)."""
    if isinstance(motif, Motif):
        return motif
    key = str(motif).strip().lower()
    key = _ALIASES.get(key, key)
    try:
        return CATALOG[key]
    except KeyError:
        raise UnknownMotifError(
            f"unknown motif {motif!r}; expected one of {', '.join(MOTIF_NAMES)}"
        ) from None
