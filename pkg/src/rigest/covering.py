"""Minimal covering families and subgraph covering densities.

A family of vertex sets *covers* a motif when every motif edge lies inside
some member.  Summing ``m^|C| p^||C||`` over the minimal covering families
``C`` of a motif gives the leading-order probability that the motif appears
on a fixed vertex set of G(n, m, p) when ``m p^2`` is small.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .catalog import Motif, get_motif
from .errors import InvalidParameterError
from .model import ModelParams

__all__ = [
    "CoveringFamily",
    "DensityPolynomial",
    "BalancedForm",
    "covers",
    "is_minimal_cover",
    "enumerate_mcf",
    "density_polynomial",
    "stirling2",
    "stirling2_recurrence",
    "bell",
    "rstar_polynomial",
    "simplify_sparse",
    "balanced_form",
    "expected_counts",
    "containment_frequency",
    "exact_containment_probability",
]

VertexSet = tuple[int, ...]


def _as_sets(family: Iterable[Iterable[int]]) -> list[frozenset[int]]:
    return [frozenset(s) for s in family]


def covers(family: Iterable[Iterable[int]], edges: Iterable[Iterable[int]]) -> bool:
    """True iff every edge is a subset of some member of ``family``."""
    members = _as_sets(family)
    return all(any(frozenset(e) <= s for s in members) for e in edges)


@dataclass(frozen=True, order=True)
class CoveringFamily:
    """A collection of distinct vertex sets, stored as sorted tuples."""

    sets: tuple[VertexSet, ...]

    @classmethod
    def of(cls, family: Iterable[Iterable[int]]) -> "CoveringFamily":
        canon = sorted({tuple(sorted(s)) for s in family}, key=lambda s: (len(s), s))
        return cls(tuple(canon))

    @property
    def size(self) -> int:
        return len(self.sets)

    @property
    def weight(self) -> int:
        return sum(len(s) for s in self.sets)

    def __str__(self) -> str:
        return "{" + ",".join("".join(map(str, s)) for s in self.sets) + "}"

    def to_json(self) -> list[list[int]]:
        return [list(s) for s in self.sets]


def _edges_of(motif: Motif | str | Iterable[Iterable[int]]) -> list[frozenset[int]]:
    if isinstance(motif, (Motif, str)):
        return [frozenset(e) for e in get_motif(motif).edges]
    return [frozenset(e) for e in motif]


def is_minimal_cover(
    family: CoveringFamily | Iterable[Iterable[int]],
    motif: Motif | str | Iterable[Iterable[int]],
) -> bool:
    """Check that ``family`` covers the motif edges and is minimal.

    Minimal means no member can be dropped and no member can be replaced by
    a strict subset of itself without losing the covering property.
    """
    sets = family.sets if isinstance(family, CoveringFamily) else family
    members = _as_sets(sets)
    if len(set(members)) != len(members):
        return False
    edges = _edges_of(motif)
    if not covers(members, edges):
        return False
    for idx, member in enumerate(members):
        rest = members[:idx] + members[idx + 1 :]
        if covers(rest, edges):
            return False
        # Dropping one vertex is enough: if a smaller subset still covers,
        # so does some one-smaller superset of it.
        for v in member:
            if covers(rest + [member - {v}], edges):
                return False
    return True


def _candidate_sets(motif: Motif) -> list[frozenset[int]]:
    """Vertex sets of size >= 2 on which the motif induces no isolated vertex.

    Any member of a minimal covering family has this property, otherwise an
    isolated vertex could be removed from it.
    """
    edges = [frozenset(e) for e in motif.edges]
    out = []
    for size in range(2, motif.n_vertices + 1):
        for combo in itertools.combinations(motif.vertices, size):
            s = frozenset(combo)
            inner = [e for e in edges if e <= s]
            touched = set().union(*inner) if inner else set()
            if touched == s:
                out.append(s)
    return out


@lru_cache(maxsize=None)
def _mcf_cached(motif: Motif) -> tuple[CoveringFamily, ...]:
    edges = [frozenset(e) for e in motif.edges]
    candidates = _candidate_sets(motif)
    found: set[CoveringFamily] = set()

    # Branch on the first uncovered edge.  Every minimal family is reached:
    # following its own members down the branches yields a covering
    # sub-family, which by minimality is the whole family.
    def search(chosen: list[frozenset[int]]) -> None:
        uncovered = next((e for e in edges if not any(e <= s for s in chosen)), None)
        if uncovered is None:
            if is_minimal_cover(chosen, edges):
                found.add(CoveringFamily.of(chosen))
            return
        for s in candidates:
            if uncovered <= s and s not in chosen:
                chosen.append(s)
                search(chosen)
                chosen.pop()

    search([])
    return tuple(sorted(found, key=lambda f: (f.size, f.weight, f.sets)))


def enumerate_mcf(motif: Motif | str) -> list[CoveringFamily]:
    """All minimal covering families of the motif's edge set, canonically ordered."""
    return list(_mcf_cached(get_motif(motif)))


@dataclass(frozen=True)
class DensityPolynomial:
    """``sum(coeff * m**a * p**b)`` with terms sorted by ``(a, b)``."""

    terms: tuple[tuple[int, int, int], ...]

    @classmethod
    def from_terms(cls, terms: Iterable[tuple[int, int, int]]) -> "DensityPolynomial":
        acc: Counter[tuple[int, int]] = Counter()
        for coeff, a, b in terms:
            acc[(a, b)] += coeff
        return cls(tuple((c, a, b) for (a, b), c in sorted(acc.items()) if c != 0))

    def evaluate(self, m: float, p: float) -> float:
        return float(sum(c * m**a * p**b for c, a, b in self.terms))

    def to_json(self) -> list[list[int]]:
        return [[c, a, b] for c, a, b in self.terms]

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for c, a, b in self.terms:
            mono = " ".join(
                x for x in (_power("m", a), _power("p", b)) if x
            )
            parts.append(f"{c} {mono}" if c != 1 else (mono or "1"))
        return " + ".join(parts)


def _power(sym: str, k: int) -> str:
    if k == 0:
        return ""
    return sym if k == 1 else f"{sym}^{k}"


@lru_cache(maxsize=None)
def _density_cached(motif: Motif) -> DensityPolynomial:
    return DensityPolynomial.from_terms((1, f.size, f.weight) for f in _mcf_cached(motif))


def density_polynomial(motif: Motif | str) -> DensityPolynomial:
    """Covering density of a motif: one ``m^|C| p^||C||`` term per minimal family."""
    return _density_cached(get_motif(motif))


def stirling2(r: int, k: int) -> int:
    """Stirling number of the second kind via the alternating binomial sum."""
    if not (0 <= k <= r <= 20):
        raise InvalidParameterError(f"stirling2 needs 0 <= k <= r <= 20, got r={r}, k={k}")
    total = sum((-1) ** (k - j) * math.comb(k, j) * j**r for j in range(k + 1))
    return total // math.factorial(k)


def stirling2_recurrence(r: int, k: int) -> int:
    """Same numbers from ``S(r, k) = k S(r-1, k) + S(r-1, k-1)``; a cross-check."""
    if not (0 <= k <= r):
        raise InvalidParameterError(f"need 0 <= k <= r, got r={r}, k={k}")
    row = [1]  # S(0, 0)
    for i in range(1, r + 1):
        new = [0] * (i + 1)
        for j in range(1, i + 1):
            new[j] = j * (row[j] if j < len(row) else 0) + row[j - 1]
        row = new
    return row[k]


def bell(r: int) -> int:
    return sum(stirling2(r, k) for k in range(r + 1))


def rstar_polynomial(r: int) -> DensityPolynomial:
    """Closed-form covering density of the r-star, ``sum_k S(r,k) m^k p^(k+r)``."""
    if not (1 <= r <= 10):
        raise InvalidParameterError(f"r must lie in 1..10, got {r}")
    return DensityPolynomial.from_terms((stirling2(r, k), k, k + r) for k in range(1, r + 1))


def _dominates(strong: tuple[int, int], weak: tuple[int, int]) -> bool:
    # m^(a-c) p^(b-d) = (m p^2)^(a-c) p^((b-d) - 2(a-c)), negligible when p^2 m -> 0.
    c, d = strong
    a, b = weak
    return (a, b) != (c, d) and c <= a and (b - d) >= 2 * (a - c)


def simplify_sparse(poly: DensityPolynomial) -> DensityPolynomial:
    """Drop terms negligible against another term when ``p << m^(-1/2) << 1``.

    The dominance relation is a partial order, so one pass against all other
    terms already reaches the fixed point.
    """
    keys = [(a, b) for _, a, b in poly.terms]
    kept = [
        (c, a, b)
        for c, a, b in poly.terms
        if not any(_dominates(other, (a, b)) for other in keys)
    ]
    return DensityPolynomial(tuple(kept))


_SUPERSCRIPT = str.maketrans("0123456789-", "⁰¹²³⁴⁵⁶⁷⁸⁹⁻")


@dataclass(frozen=True)
class BalancedForm:
    """``(sum_i coeffs[i] mu^i) * mu^mu_power * m^m_power``."""

    coeffs: tuple[int, ...]
    mu_power: int
    m_power: int

    def evaluate(self, mu: float, m: float | None = None) -> float:
        poly = sum(c * mu**i for i, c in enumerate(self.coeffs)) * mu**self.mu_power
        return poly if m is None else poly * m**self.m_power

    def __str__(self) -> str:
        def sup(k: int) -> str:
            return str(k).translate(_SUPERSCRIPT)

        parts = []
        for i, c in enumerate(self.coeffs):
            if c == 0:
                continue
            mono = "" if i == 0 else ("μ" if i == 1 else f"μ{sup(i)}")
            parts.append(mono if (c == 1 and mono) else f"{c}{mono}")
        head = f"({'+'.join(parts)})" if len(parts) > 1 else ("" if parts == ["1"] else parts[0])
        mu = "" if self.mu_power == 0 else ("μ" if self.mu_power == 1 else f"μ{sup(self.mu_power)}")
        m = "" if self.m_power == 0 else f"m{sup(self.m_power)}"
        return (head + mu + m) or "1"


def balanced_form(poly: DensityPolynomial) -> BalancedForm:
    """Leading behaviour after substituting ``p = mu / m``.

    ``c m^a p^b`` becomes ``c mu^b m^(a-b)``; only terms with the largest
    exponent of ``m`` survive.
    """
    if not poly.terms:
        raise InvalidParameterError("cannot take the balanced form of the zero polynomial")
    top = max(a - b for _, a, b in poly.terms)
    mu_terms = {b: c for c, a, b in poly.terms if a - b == top}
    low = min(mu_terms)
    coeffs = tuple(mu_terms.get(low + i, 0) for i in range(max(mu_terms) - low + 1))
    return BalancedForm(coeffs=coeffs, mu_power=low, m_power=top)


def expected_counts(params: ModelParams, n0: int) -> tuple[float, float, float]:
    """Expected numbers of edges, 2-stars and triangles among ``n0`` nodes.

    Edges use the exact edge probability ``1 - (1 - p^2)^m``; 2-stars and
    triangles use the leading-order covering densities.
    """
    if n0 < 3:
        raise InvalidParameterError(f"n0 must be at least 3, got {n0}")
    m, p = params.m, params.p
    pairs = math.comb(n0, 2)
    triples = math.comb(n0, 3)
    edge_prob = -math.expm1(m * math.log1p(-p * p)) if p < 1 else 1.0
    e_k2 = pairs * edge_prob
    e_s2 = 3 * triples * (m * p**3 + m**2 * p**4)
    e_k3 = triples * (m * p**3 + m**3 * p**6)
    return e_k2, e_s2, e_k3


def _category_probabilities(v: int, p: float) -> np.ndarray:
    sizes = np.array([bin(mask).count("1") for mask in range(1 << v)])
    return p**sizes * (1.0 - p) ** (v - sizes)


def containment_frequency(
    motif: Motif | str,
    m: int,
    p: float,
    reps: int,
    seed: int | np.random.SeedSequence | None = None,
    chunk: int = 200_000,
) -> tuple[int, int]:
    """Monte Carlo count of ``R`` contained in G(., m, p) on a fixed vertex set.

    Each attribute lands on a subset ``S`` of the motif's ``v`` vertices with
    probability ``p^|S| (1-p)^(v-|S|)``, so one replicate only needs the
    multinomial counts of the ``2^v`` categories.  Returns
    ``(hits, reps)``.
    """
    motif = get_motif(motif)
    if reps < 1:
        raise InvalidParameterError("reps must be positive")
    v = motif.n_vertices
    probs = _category_probabilities(v, p)
    probs = probs / probs.sum()
    edge_masks = [(1 << (i - 1)) | (1 << (j - 1)) for i, j in motif.edges]
    # for each edge, the categories whose vertex set contains it
    holders = [
        np.array([mask for mask in range(1 << v) if mask & em == em]) for em in edge_masks
    ]
    rng = np.random.default_rng(seed)
    hits = 0
    done = 0
    while done < reps:
        size = min(chunk, reps - done)
        counts = rng.multinomial(m, probs, size=size)
        present = np.ones(size, dtype=bool)
        for cols in holders:
            present &= counts[:, cols].any(axis=1)
        hits += int(present.sum())
        done += size
    return hits, reps



def exact_containment_probability(motif: Motif | str, m: int, p: float) -> float:
    """Exact ``P(R subset of G)`` on a fixed vertex set, by inclusion-exclusion.

    An edge is missing iff no attribute lands on a category containing it, so
    for any edge subset ``F`` the probability that all of ``F`` is missing is
    ``(1 - q(F))^m`` with ``q(F)`` the total probability of categories
    containing some edge of ``F``.  Exponential in the number of edges.
    """
    motif = get_motif(motif)
    v = motif.n_vertices
    probs = _category_probabilities(v, p)
    edge_masks = [(1 << (i - 1)) | (1 << (j - 1)) for i, j in motif.edges]
    total = 0.0
    for k in range(len(edge_masks) + 1):
        for subset in itertools.combinations(edge_masks, k):
            hit = [mask for mask in range(1 << v) if any(mask & e == e for e in subset)]
            q = float(probs[hit].sum()) if hit else 0.0
            total += (-1) ** k * (1.0 - q) ** m
    return total
