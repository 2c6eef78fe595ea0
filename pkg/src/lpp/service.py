"""Session dispatch and the threaded TCP responder."""

from __future__ import annotations

import logging
import socket
import socketserver
from typing import Callable

from .cn_protocol import QuerySpec, receive_init, run_responder, run_querier, CnBreakdown
from .errors import LppError, ProtocolViolation
from .graph import Graph
from .he import run_he_querier, run_he_responder
from .wire import Channel, SessionTranscript

log = logging.getLogger(__name__)


def serve_session(graph: Graph, channel: Channel, params_name: str | None = None,
                  mode: str | None = None, rng=None) -> SessionTranscript:
    """Run one responder session, picking the mode from the querier's SessionInit."""
    init = receive_init(channel)
    if (params_name and init.params_name != params_name) or (mode and init.mode != mode):
        channel.transcript.outcome = "aborted"
        channel.abort(f"this responder serves params={params_name} mode={mode or 'any'}")
        raise ProtocolViolation(f"rejected session: params={init.params_name} mode={init.mode}")
    if init.mode == "he":
        return run_he_responder(None, graph, channel, rng, init=init)
    return run_responder(None, graph, channel, rng, init=init)


def query(spec: QuerySpec, graph: Graph, channel: Channel, rng=None) -> CnBreakdown | int:
    """Querier entry for either mode: a CnBreakdown in psi mode, bare cn in he mode."""
    if spec.mode == "he":
        return run_he_querier(spec, graph, channel, rng)
    return run_querier(spec, graph, channel, rng)


class ResponderServer(socketserver.ThreadingTCPServer):
    daemon_threads = True
    allow_reuse_address = True

    def __init__(self, address: tuple[str, int], graph: Graph, params_name: str | None = None,
                 mode: str | None = None,
                 on_session: Callable[[SessionTranscript], None] | None = None):
        self.graph = graph
        self.params_name = params_name
        self.mode = mode
        self.on_session = on_session
        super().__init__(address, _Handler)


class _Handler(socketserver.BaseRequestHandler):
    server: ResponderServer

    def handle(self) -> None:
        self.request.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
        channel = Channel(self.request)
        try:
            transcript = serve_session(self.server.graph, channel, self.server.params_name,
                                       self.server.mode)
            log.info("session from %s:%d %s", *self.client_address, transcript.outcome)
        except (LppError, OSError) as exc:
            log.warning("session from %s:%d aborted: %s", *self.client_address, exc)
            transcript = channel.transcript
        if self.server.on_session:
            self.server.on_session(transcript)
