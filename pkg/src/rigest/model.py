"""Parameter spaces of the binomial random intersection graph G(n, m, p).

Two parameterisations are supported: the raw triple ``(n, m, p)`` and the
balanced sparse regime ``(lam, mu, n)`` where ``lam = n m p^2`` is the mean
degree and ``mu = m p`` the attribute intensity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParameterError

__all__ = [
    "ModelParams",
    "RegimeParams",
    "regime_to_model",
    "model_to_regime",
    "regime_flags",
]


@dataclass(frozen=True)
class ModelParams:
    n: int
    m: int
    p: float

    def __post_init__(self) -> None:
        if int(self.n) != self.n or self.n < 1:
            raise InvalidParameterError(f"n must be a positive integer, got {self.n!r}")
        if int(self.m) != self.m or self.m < 1:
            raise InvalidParameterError(f"m must be a positive integer, got {self.m!r}")
        if not (0.0 <= self.p <= 1.0):
            raise InvalidParameterError(f"p must lie in [0, 1], got {self.p!r}")


@dataclass(frozen=True)
class RegimeParams:
    lam: float
    mu: float
    n: int

    def __post_init__(self) -> None:
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise InvalidParameterError(f"lambda must be a positive real, got {self.lam!r}")
        if not (self.mu > 0 and math.isfinite(self.mu)):
            raise InvalidParameterError(f"mu must be a positive real, got {self.mu!r}")
        if int(self.n) != self.n or self.n < 1:
            raise InvalidParameterError(f"n must be a positive integer, got {self.n!r}")


def _round_half_up(x: float) -> int:
    return math.floor(x + 0.5)


def regime_to_model(r: RegimeParams) -> ModelParams:
    """Map ``(lam, mu, n)`` to ``(n, m, p)`` with ``m ~ (mu^2/lam) n`` and ``p ~ (lam/mu)/n``.

    ``m`` is rounded half-up and kept at least 1; ``p`` is clamped to 1.
    Use :func:`regime_flags` to find out whether either adjustment kicked in.
    """
    m = max(1, _round_half_up(r.mu * r.mu / r.lam * r.n))
    p = min(1.0, r.lam / (r.mu * r.n))
    return ModelParams(n=r.n, m=m, p=p)


def model_to_regime(params: ModelParams) -> RegimeParams:
    """Inverse mapping: ``lam = n m p^2`` and ``mu = m p``.

    Raises :class:`InvalidParameterError` when ``p == 0`` since the regime
    parameters must be strictly positive.
    """
    lam = params.n * params.m * params.p * params.p
    mu = params.m * params.p
    return RegimeParams(lam=lam, mu=mu, n=params.n)


def regime_flags(r: RegimeParams) -> list[str]:
    flags = []
    if r.mu * r.mu / r.lam * r.n < 0.5:
        flags.append("m-clamped")
    if r.lam / (r.mu * r.n) > 1.0:
        flags.append("p-clamped")
    return flags
