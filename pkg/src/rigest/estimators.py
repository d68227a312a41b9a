"""Moment estimators of the mean degree and attribute intensity.

``lambda_hat`` and ``mu2_hat`` need only the degree sequence of the
observed subgraph; ``mu1_hat`` (and the transitivity coefficient) also need
the triangle count.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Any

from .errors import InvalidParameterError
from .graph import Graph
from .motifs import (
    DegreeMoments,
    MotifCounts,
    count_pairs_and_stars,
    count_triangles,
    degree_moments,
)

__all__ = [
    "EstimateReport",
    "lambda_hat",
    "mu1_hat",
    "mu2_hat",
    "mu2_from_counts",
    "estimate_all",
    "REPORT_KEYS",
]

NO_TRIANGLES = "no-triangles"
MU2_DENOMINATOR = "mu2-denominator-nonpositive"
FAST_ONLY = "fast-only"
NO_TWO_STARS = "no-2-stars"

REPORT_KEYS = (
    "n",
    "n0",
    "lambda_hat",
    "mu1_hat",
    "mu2_hat",
    "transitivity",
    "n_k2",
    "n_s2",
    "n_k3",
    "a1",
    "a2",
    "d_max",
    "flags",
)


@dataclass
class EstimateReport:
    n: int
    n0: int
    lambda_hat: float
    mu1_hat: float | None
    mu2_hat: float | None
    transitivity: float | None
    counts: MotifCounts
    moments: DegreeMoments
    flags: list[str] = field(default_factory=list)

    def to_dict(self) -> dict[str, Any]:
        """Flat mapping with keys :data:`REPORT_KEYS`; undefined values are None."""
        flat = {
            "n": self.n,
            "n0": self.n0,
            "lambda_hat": self.lambda_hat,
            "mu1_hat": self.mu1_hat,
            "mu2_hat": self.mu2_hat,
            "transitivity": self.transitivity,
            **asdict(self.counts),
            "a1": self.moments.a1,
            "a2": self.moments.a2,
            "d_max": self.moments.d_max,
            "flags": list(self.flags),
        }
        return {k: flat[k] for k in REPORT_KEYS}


def lambda_hat(g_obs: Graph, n: int) -> float:
    """Normalised average degree ``(n / n0^2) * sum(deg)``."""
    n0 = g_obs.n
    if n0 < 1 or n < n0:
        raise InvalidParameterError(f"need n >= n0 >= 1, got n={n}, n0={n0}")
    return n * int(g_obs.degrees.sum()) / (n0 * n0)


def mu1_hat(c: MotifCounts) -> float | None:
    """``N_S2 / (3 N_K3) - 1``; None when there are no triangles."""
    if not c.n_k3:
        return None
    return c.n_s2 / (3 * c.n_k3) - 1.0


def mu2_hat(n0: int, moments: DegreeMoments) -> float | None:
    """``((a2 - a1) / a1^2 - 1)^-1``; None unless ``a1 > 0`` and the bracket is positive."""
    if n0 < 1:
        raise InvalidParameterError("n0 must be positive")
    a1, a2 = moments.a1, moments.a2
    if a1 <= 0:
        return None
    denom = (a2 - a1) / (a1 * a1) - 1.0
    if not denom > 0:
        return None
    return 1.0 / denom


def mu2_from_counts(n0: int, c: MotifCounts) -> float | None:
    """The count form ``(n0 N_S2 / (2 N_K2^2) - 1)^-1`` of the same estimator."""
    if c.n_k2 == 0:
        return None
    denom = n0 * c.n_s2 / (2 * c.n_k2 * c.n_k2) - 1.0
    if not denom > 0:
        return None
    return 1.0 / denom


def estimate_all(
    g_obs: Graph, n: int, fast_only: bool = False, check: bool = False
) -> EstimateReport:
    """Every estimator for one observed subgraph.

    With ``fast_only`` the triangle count is skipped, leaving ``mu1_hat`` and
    ``transitivity`` undefined; the cost is then linear in the number of
    edges.  ``check`` cross-validates the two forms of ``mu2_hat``.
    """
    lam = lambda_hat(g_obs, n)
    moments = degree_moments(g_obs)
    counts = count_pairs_and_stars(g_obs)
    flags: list[str] = []

    mu2 = mu2_hat(g_obs.n, moments)
    if mu2 is None:
        flags.append(MU2_DENOMINATOR)
    if check:
        alt = mu2_from_counts(g_obs.n, counts)
        if (mu2 is None) != (alt is None) or (
            mu2 is not None and not math.isclose(mu2, alt, rel_tol=1e-9, abs_tol=1e-12)
        ):
            raise AssertionError(f"mu2 forms disagree: {mu2!r} vs {alt!r}")

    if fast_only:
        flags.append(FAST_ONLY)
        mu1 = None
        t = None
    else:
        counts = MotifCounts(counts.n_k2, counts.n_s2, count_triangles(g_obs))
        mu1 = mu1_hat(counts)
        if mu1 is None:
            flags.append(NO_TRIANGLES)
        if counts.n_s2 > 0:
            t = 3 * counts.n_k3 / counts.n_s2
        else:
            t = None
            flags.append(NO_TWO_STARS)
    return EstimateReport(
        n=n,
        n0=g_obs.n,
        lambda_hat=lam,
        mu1_hat=mu1,
        mu2_hat=mu2,
        transitivity=t,
        counts=counts,
        moments=moments,
        flags=flags,
    )
