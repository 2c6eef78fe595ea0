"""Loopback timing of the psi-mode protocol on synthetic neighbour sets."""

from __future__ import annotations

import random
import statistics
import threading
from dataclasses import dataclass, field

from .cn_protocol import PhaseTimer, QuerySpec, run_querier, run_responder
from .graph import Graph
from .wire import loopback_pair

PHASES = ("offline", "psi1", "psi2", "psi3", "total")
CSV_HEADER = "nx1,ny1,nx2,ny2,phase,mean_ms,stddev_ms"

# Reference neighbour counts, in header order: x and y in graph 1, then in graph 2.
REFERENCE_SIZES = (120, 48, 114, 47)


@dataclass
class BenchRecord:
    nx1: int
    ny1: int
    nx2: int
    ny2: int
    params_name: str
    repetitions: int
    wall_ms: dict[str, list[float]] = field(default_factory=dict)

    def mean(self, phase: str) -> float:
        return statistics.fmean(self.wall_ms[phase])

    def stddev(self, phase: str) -> float:
        values = self.wall_ms[phase]
        return statistics.stdev(values) if len(values) > 1 else 0.0

    def csv_rows(self) -> list[str]:
        return [f"{self.nx1},{self.ny1},{self.nx2},{self.ny2},{phase},"
                f"{self.mean(phase):.3f},{self.stddev(phase):.3f}" for phase in PHASES]


def synthetic_graphs(nx1: int, ny1: int, nx2: int, ny2: int,
                     seed: int = 0) -> tuple[Graph, Graph]:
    """Two graphs where x and y have exactly the requested neighbour counts.

    Neighbours are drawn from a shared pool twice the size of the largest
    set, so the local, crossover and overlap sets are all non-trivial.
    """
    rng = random.Random(seed)
    pool = [f"n{i}" for i in range(2 * max(nx1, ny1, nx2, ny2, 1))]
    graphs = []
    for sx, sy in ((nx1, ny1), (nx2, ny2)):
        g = Graph()
        g.add_node("x")
        g.add_node("y")
        for v in rng.sample(pool, sx):
            g.add_edge("x", v)
        for v in rng.sample(pool, sy):
            g.add_edge("y", v)
        graphs.append(g)
    return graphs[0], graphs[1]


def run_once(g1: Graph, g2: Graph, params_name: str = "toy") -> dict[str, float]:
    spec = QuerySpec("x", "y", "psi", params_name)
    querier, responder = loopback_pair()
    errors: list[BaseException] = []

    def serve():
        try:
            run_responder(spec, g2, responder)
        except BaseException as exc:  # surfaced in the caller's thread
            errors.append(exc)

    t = threading.Thread(target=serve)
    t.start()
    timer = PhaseTimer()
    try:
        run_querier(spec, g1, querier, timer=timer)
    finally:
        t.join()
        querier.close()
        responder.close()
    if errors:
        raise errors[0]
    return timer.phases


def bench(sizes: tuple[int, int, int, int], params_name: str = "toy", reps: int = 20,
          seed: int = 0) -> BenchRecord:
    if reps < 1:
        raise ValueError("reps must be >= 1")
    g1, g2 = synthetic_graphs(*sizes, seed=seed)
    record = BenchRecord(*sizes, params_name=params_name, repetitions=reps,
                         wall_ms={p: [] for p in PHASES})
    for _ in range(reps):
        for phase, ms in run_once(g1, g2, params_name).items():
            record.wall_ms[phase].append(ms)
    return record
