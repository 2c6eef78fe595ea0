"""Graph model, edge-list I/O, Barabási-Albert generation and utility experiments."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .errors import ConfigError, ParseError

NodeId = bytes
NeighbourSet = frozenset


def as_node_id(value: str | bytes | int) -> NodeId:
    if isinstance(value, bytes):
        return value
    return str(value).encode("utf-8")


class Graph:
    """Undirected simple graph keyed by byte-string node ids.

    Self-loops are rejected and every edge is stored in both directions.
    """

    def __init__(self) -> None:
        self._adj: dict[NodeId, set[NodeId]] = {}

    @classmethod
    def from_edges(cls, edges: Iterable[tuple[str | bytes | int, str | bytes | int]]) -> Graph:
        g = cls()
        for u, v in edges:
            g.add_edge(u, v)
        return g

    def add_node(self, u: str | bytes | int) -> None:
        self._adj.setdefault(as_node_id(u), set())

    def add_edge(self, u: str | bytes | int, v: str | bytes | int) -> None:
        u, v = as_node_id(u), as_node_id(v)
        if u == v:
            raise ValueError(f"self-loop on {u!r}")
        self._adj.setdefault(u, set()).add(v)
        self._adj.setdefault(v, set()).add(u)

    def neighbours(self, u: str | bytes | int) -> frozenset[NodeId]:
        """Neighbour set of ``u``; unknown nodes have no neighbours."""
        return frozenset(self._adj.get(as_node_id(u), ()))

    def has_edge(self, u: str | bytes | int, v: str | bytes | int) -> bool:
        return as_node_id(v) in self._adj.get(as_node_id(u), ())

    def degree(self, u: str | bytes | int) -> int:
        return len(self._adj.get(as_node_id(u), ()))

    @property
    def nodes(self) -> list[NodeId]:
        return list(self._adj)

    def __len__(self) -> int:
        return len(self._adj)

    def __contains__(self, u: object) -> bool:
        return isinstance(u, (str, bytes, int)) and as_node_id(u) in self._adj

    def edges(self) -> Iterator[tuple[NodeId, NodeId]]:
        for u, nbrs in self._adj.items():
            for v in nbrs:
                if u < v:
                    yield u, v

    @property
    def edge_count(self) -> int:
        return sum(len(n) for n in self._adj.values()) // 2

    def degree_sum(self) -> int:
        return sum(len(n) for n in self._adj.values())

    def is_symmetric(self) -> bool:
        return all(u not in nbrs and all(u in self._adj.get(v, ()) for v in nbrs)
                   for u, nbrs in self._adj.items())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __repr__(self) -> str:
        return f"Graph(nodes={len(self)}, edges={self.edge_count})"


def load_edge_list(text: str) -> Graph:
    """Parse ``u v`` lines. ``#`` starts a comment and blank lines are skipped."""
    g = Graph()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError(lineno, f"expected 'u v', got {raw!r}")
        u, v = parts
        if u == v:
            raise ParseError(lineno, f"self-loop on {u!r}")
        g.add_edge(u, v)
    return g


def read_edge_list(path: str) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return load_edge_list(fh.read())


def dump_edge_list(g: Graph) -> str:
    lines = [f"{u.decode()} {v.decode()}" for u, v in sorted(g.edges())]
    return "\n".join(lines) + ("\n" if lines else "")


@dataclass(frozen=True)
class BaConfig:
    n: int
    k: int
    seed: int = 0

    def __post_init__(self) -> None:
        if not 1 <= self.k < self.n:
            raise ConfigError(f"Barabási-Albert needs 1 <= k < n, got k={self.k}, n={self.n}")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must fit in 64 bits")


def ba_generate(cfg: BaConfig) -> Graph:
    """Preferential-attachment graph grown from a k-clique.

    Nodes are named ``"0" .. "n-1"``. Each new node links to k distinct
    existing nodes drawn with probability proportional to current degree.
    The edge count is always ``k*(k-1)/2 + (n-k)*k``.
    """
    rng = random.Random(cfg.seed)
    n, k = cfg.n, cfg.k
    g = Graph()
    for i in range(k):
        g.add_node(i)
        for j in range(i):
            g.add_edge(i, j)
    # One entry per edge endpoint, so uniform picks are degree-proportional.
    repeated: list[int] = [i for i in range(k) for _ in range(k - 1)]
    for source in range(k, n):
        if repeated:
            targets: set[int] = set()
            while len(targets) < k:
                targets.add(rng.choice(repeated))
        else:
            # k == 1: the seed is an isolated node, nothing to weight by.
            targets = {rng.randrange(source)}
        for t in sorted(targets):
            g.add_edge(source, t)
        repeated.extend(sorted(targets))
        repeated.extend([source] * k)
    return g


def union_graph(g1: Graph, g2: Graph) -> Graph:
    out = Graph()
    for g in (g1, g2):
        for u in g.nodes:
            out.add_node(u)
        for u, v in g.edges():
            out.add_edge(u, v)
    return out


def avg_common_neighbours(g: Graph) -> Fraction:
    """Mean of ``|N(u) & N(v)|`` over all unordered node pairs.

    Every node w with degree d is a common neighbour of exactly C(d, 2)
    pairs, which gives the sum without touching the pairs themselves.
    """
    n = len(g)
    if n < 2:
        return Fraction(0)
    total = sum(d * (d - 1) // 2 for d in (g.degree(u) for u in g.nodes))
    return Fraction(total, n * (n - 1) // 2)


@dataclass(frozen=True)
class UtilityRow:
    seed: int
    avg_graph1: Fraction
    avg_graph2: Fraction
    avg_union: Fraction


def utility_experiment(n: int, k: int, seeds: Sequence[int]) -> list[UtilityRow]:
    """Two independent BA graphs on the same node ids, per seed."""
    rows = []
    for seed in seeds:
        g1 = ba_generate(BaConfig(n, k, _derive_seed(seed, 1)))
        g2 = ba_generate(BaConfig(n, k, _derive_seed(seed, 2)))
        rows.append(UtilityRow(seed, avg_common_neighbours(g1), avg_common_neighbours(g2),
                               avg_common_neighbours(union_graph(g1, g2))))
    return rows


@dataclass(frozen=True)
class SweepRow:
    k: int
    avg_union: float
    avg_graph2: float


def k_sweep_experiment(n: int, k1: int, k_values: Sequence[int],
                       seeds: Sequence[int] = (0,)) -> list[SweepRow]:
    """Fix graph 1 at ``k1`` and vary graph 2's k; averages are means over seeds.

    k = n-1 would make graph 2 complete, so the sweep only accepts k <= n-2.
    """
    for k in (k1, *k_values):
        BaConfig(n, k)
        if k > n - 2:
            raise ConfigError(f"k={k} makes a complete graph on {n} nodes; use k <= n-2")
    rows = []
    for k in k_values:
        unions, seconds = [], []
        for seed in seeds:
            g1 = ba_generate(BaConfig(n, k1, _derive_seed(seed, 1)))
            g2 = ba_generate(BaConfig(n, k, _derive_seed(seed, 2)))
            seconds.append(avg_common_neighbours(g2))
            unions.append(avg_common_neighbours(union_graph(g1, g2)))
        rows.append(SweepRow(k, float(sum(unions) / len(seeds)), float(sum(seconds) / len(seeds))))
    return rows


def _derive_seed(seed: int, which: int) -> int:
    return (seed * 2 + which) % 2**64
