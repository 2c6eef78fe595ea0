"""Common neighbours of (x, y) over the union of two privately held graphs.

Each party strips its own local common neighbours out of Γ(x) and Γ(y)
before the crossover intersections, so that

    cn = local1 + local2 + crossover1 + crossover2 - overlap

counts every union common neighbour exactly once. Session flow (psi mode)::

    querier                          responder
    SessionInit          ------>
                         <------     Halt | Local2Card(|local2|)
    PsiClientMasked(1)   ------>                       nx1 vs ny2
                         <------     PsiServerResponse(1)
    PsiClientMasked(2)   ------>                       ny1 vs nx2
                         <------     PsiServerResponse(2)
    PsiClientMasked(3)   ------>                       local1 vs local2
                         <------     PsiServerResponse(3)
    Close                ------>
"""

from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from typing import Callable, TypeVar

from . import psi_ca
from .errors import HaltedDirectNeighbour, InvalidInput, ProtocolViolation
from .graph import Graph, NodeId, as_node_id
from .group import get_params
from .wire import (Channel, Close, Halt, Local2Card, PsiClientMasked, PsiServerResponse,
                   SessionInit, SessionTranscript)

log = logging.getLogger(__name__)

MODES = ("psi", "he")
T = TypeVar("T")


@dataclass(frozen=True)
class QuerySpec:
    x_id: bytes
    y_id: bytes
    mode: str = "psi"
    params_name: str = "toy"

    def __post_init__(self) -> None:
        object.__setattr__(self, "x_id", as_node_id(self.x_id))
        object.__setattr__(self, "y_id", as_node_id(self.y_id))
        if self.x_id == self.y_id:
            raise InvalidInput("x and y must be different nodes")
        if not self.x_id or not self.y_id:
            raise InvalidInput("node ids must be non-empty")
        if self.mode not in MODES:
            raise InvalidInput(f"unknown mode {self.mode!r}")
        get_params(self.params_name)

    def init_message(self) -> SessionInit:
        return SessionInit(self.params_name, self.mode, self.x_id, self.y_id)


@dataclass(frozen=True)
class CnBreakdown:
    local1: int
    local2: int
    crossover1: int
    crossover2: int
    overlap: int
    cn: int

    def __post_init__(self) -> None:
        expected = self.local1 + self.local2 + self.crossover1 + self.crossover2 - self.overlap
        if self.cn != expected:
            raise ValueError(f"cn={self.cn} does not match the decomposition ({expected})")

    @classmethod
    def from_components(cls, local1: int, local2: int, crossover1: int, crossover2: int,
                        overlap: int) -> CnBreakdown:
        return cls(local1, local2, crossover1, crossover2, overlap,
                   local1 + local2 + crossover1 + crossover2 - overlap)

    def as_dict(self) -> dict[str, int]:
        return {"cn": self.cn, "local1": self.local1, "local2": self.local2,
                "cr1": self.crossover1, "cr2": self.crossover2, "overlap": self.overlap}

    def __str__(self) -> str:
        return " ".join(f"{k}={v}" for k, v in self.as_dict().items())


@dataclass(frozen=True)
class PreparedSets:
    nx: frozenset[NodeId]
    ny: frozenset[NodeId]
    local: frozenset[NodeId]


def prepare_inputs(graph: Graph, x_id, y_id, role: str = "querier") -> PreparedSets:
    """Split Γ(x), Γ(y) into local common neighbours and the remainders.

    Raises ``HaltedDirectNeighbour(role)`` when x and y are adjacent in
    ``graph``; there is nothing to compute in that case.
    """
    x, y = as_node_id(x_id), as_node_id(y_id)
    if x == y:
        raise InvalidInput("x and y must be different nodes")
    if graph.has_edge(x, y):
        raise HaltedDirectNeighbour(role)
    ends = {x, y}
    gx = graph.neighbours(x) - ends
    gy = graph.neighbours(y) - ends
    local = gx & gy
    return PreparedSets(gx - local, gy - local, local)


def brute_force_cn(g1: Graph, g2: Graph, x_id, y_id) -> CnBreakdown:
    """Plaintext reference: sees both graphs, cn taken straight from the union."""
    x, y = as_node_id(x_id), as_node_id(y_id)
    ends = {x, y}
    g1x, g1y = g1.neighbours(x) - ends, g1.neighbours(y) - ends
    g2x, g2y = g2.neighbours(x) - ends, g2.neighbours(y) - ends
    local1, local2 = g1x & g1y, g2x & g2y
    cr1 = (g1x - local1) & (g2y - local2)
    cr2 = (g1y - local1) & (g2x - local2)
    cn = len((g1x | g2x) & (g1y | g2y))
    return CnBreakdown(len(local1), len(local2), len(cr1), len(cr2), len(local1 & local2), cn)


@dataclass
class PhaseTimer:
    """Wall-clock milliseconds per protocol phase, filled in by ``run_querier``."""

    phases: dict[str, float] = field(default_factory=dict)

    def measure(self, name: str, fn: Callable[[], T]) -> T:
        start = time.perf_counter()
        try:
            return fn()
        finally:
            self.phases[name] = (time.perf_counter() - start) * 1000.0


def _guarded(channel: Channel, body: Callable[[], T]) -> T:
    try:
        return body()
    except HaltedDirectNeighbour:
        channel.transcript.outcome = "halted-direct-neighbour"
        raise
    except (ProtocolViolation, OSError, ValueError) as exc:
        channel.transcript.outcome = "aborted"
        channel.abort(str(exc))
        raise


def run_querier(spec: QuerySpec, graph1: Graph, channel: Channel,
                rng: random.Random | None = None,
                timer: PhaseTimer | None = None) -> CnBreakdown:
    """Querier side of the psi-mode session. Raises ``HaltedDirectNeighbour`` on halt."""
    if spec.mode != "psi":
        raise InvalidInput("run_querier handles psi mode; use he.run_he_querier for he")
    mine = prepare_inputs(graph1, spec.x_id, spec.y_id, "querier")
    params = get_params(spec.params_name)
    channel.params = params
    timer = timer or PhaseTimer()
    start = time.perf_counter()

    def session() -> CnBreakdown:
        def offline():
            clients = [psi_ca.client_offline(sorted(s), params, rng)
                       for s in (mine.nx, mine.ny, mine.local)]
            channel.send(spec.init_message())
            reply = channel.expect(Halt, Local2Card)
            if isinstance(reply, Halt):
                raise HaltedDirectNeighbour("responder")
            return clients, reply.count

        clients, local2 = timer.measure("offline", offline)
        results = []
        for index, client in enumerate(clients, start=1):
            def one_psi(index=index, client=client):
                channel.send(PsiClientMasked(index, tuple(client.masked)))
                resp = channel.expect(PsiServerResponse)
                if resp.psi_index != index:
                    raise ProtocolViolation(f"response for PSI {resp.psi_index}, expected {index}")
                return psi_ca.client_finalize(client, resp.remasked, resp.tags).cardinality
            results.append(timer.measure(f"psi{index}", one_psi))
        channel.send(Close())
        channel.transcript.outcome = "completed"
        cr1, cr2, overlap = results
        return CnBreakdown.from_components(len(mine.local), local2, cr1, cr2, overlap)

    try:
        return _guarded(channel, session)
    finally:
        timer.phases["total"] = (time.perf_counter() - start) * 1000.0


def receive_init(channel: Channel, expected: QuerySpec | None = None) -> SessionInit:
    """Read SessionInit and bind the channel to its parameter set."""
    def body():
        init = channel.expect(SessionInit)
        channel.params = get_params(init.params_name)
        if init.x_id == init.y_id or not init.x_id or not init.y_id:
            raise ProtocolViolation("session init with invalid node pair")
        if expected is not None and (init.x_id, init.y_id, init.mode, init.params_name) != (
                expected.x_id, expected.y_id, expected.mode, expected.params_name):
            raise ProtocolViolation("session init does not match the agreed query")
        return init
    return _guarded(channel, body)


def run_responder(spec: QuerySpec | None, graph2: Graph, channel: Channel,
                  rng: random.Random | None = None,
                  init: SessionInit | None = None) -> SessionTranscript:
    """Responder side of the psi-mode session.

    ``spec`` pins the agreed query; ``None`` accepts whatever the querier
    asks for. Pass ``init`` when the SessionInit was already read by a
    dispatcher.
    """
    if init is None:
        init = receive_init(channel, spec)

    def session() -> SessionTranscript:
        if init.mode != "psi":
            raise ProtocolViolation("run_responder handles psi mode only")
        params = channel.params
        try:
            mine = prepare_inputs(graph2, init.x_id, init.y_id, "responder")
        except HaltedDirectNeighbour:
            channel.send(Halt())
            channel.transcript.outcome = "halted-direct-neighbour"
            log.info("halted: %r and %r are direct neighbours", init.x_id, init.y_id)
            return channel.transcript
        # PSI 1 pairs querier nx1 with our ny2, PSI 2 pairs ny1 with nx2.
        servers = [psi_ca.server_offline(sorted(s), params, rng)
                   for s in (mine.ny, mine.nx, mine.local)]
        channel.send(Local2Card(len(mine.local)))
        for index, server in enumerate(servers, start=1):
            req = channel.expect(PsiClientMasked)
            if req.psi_index != index:
                raise ProtocolViolation(f"PSI {req.psi_index} out of order, expected {index}")
            remasked, tags = psi_ca.server_respond(server, req.elements)
            channel.send(PsiServerResponse(index, tuple(remasked), tuple(tags)))
        channel.expect(Close)
        channel.transcript.outcome = "completed"
        return channel.transcript

    return _guarded(channel, session)
