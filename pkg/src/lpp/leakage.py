"""How many neighbour-set configurations remain consistent with a leaked intersection size."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

# Beyond this universe size the log column switches to log-gamma.
EXACT_LOG_LIMIT = 10_000


@dataclass(frozen=True)
class LeakageQuery:
    universe: int
    cardinality: int

    def __post_init__(self) -> None:
        if self.universe < 0 or self.cardinality < 0:
            raise DomainError("universe and cardinality must be non-negative")
        if self.cardinality > self.universe:
            raise DomainError(
                f"cardinality {self.cardinality} exceeds universe {self.universe}")

    @classmethod
    def for_graph(cls, total_nodes: int, cardinality: int) -> LeakageQuery:
        """The two query endpoints are never candidates, so the universe is n - 2."""
        return cls(total_nodes - 2, cardinality)


def possibilities(q: LeakageQuery) -> int:
    return math.comb(q.universe, q.cardinality)


def log10_possibilities(q: LeakageQuery) -> float:
    n, k = q.universe, q.cardinality
    return (math.lgamma(n + 1) - math.lgamma(k + 1) - math.lgamma(n - k + 1)) / math.log(10)


def log10_column(q: LeakageQuery) -> float:
    if q.universe <= EXACT_LOG_LIMIT:
        return math.log10(possibilities(q))
    return log10_possibilities(q)


def leakage_curve(universe: int) -> list[tuple[int, int]]:
    if universe < 0:
        raise DomainError("universe must be non-negative")
    return [(k, math.comb(universe, k)) for k in range(universe + 1)]


def curve_csv(universe: int, max_cardinality: int | None = None) -> str:
    top = universe if max_cardinality is None else min(universe, max_cardinality)
    lines = ["cardinality,possibilities,log10"]
    for k in range(top + 1):
        q = LeakageQuery(universe, k)
        lines.append(f"{k},{possibilities(q)},{log10_column(q):.6f}")
    return "\n".join(lines) + "\n"
