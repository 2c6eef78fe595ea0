import random
import threading
from dataclasses import dataclass

import pytest

from lpp.cn_protocol import QuerySpec
from lpp.graph import Graph
from lpp.group import TOY
from lpp.service import query, serve_session
from lpp.wire import SessionTranscript, loopback_pair


@pytest.fixture
def params():
    return TOY


@pytest.fixture
def fixture_graphs():
    """Four neighbours around x, y; union cn is 4."""
    g1 = Graph.from_edges([("x", "a"), ("x", "b"), ("y", "a"), ("y", "c")])
    g2 = Graph.from_edges([("x", "a"), ("x", "c"), ("x", "d"),
                           ("y", "a"), ("y", "b"), ("y", "d")])
    return g1, g2


@dataclass
class SessionRun:
    result: object
    error: BaseException | None
    responder_error: BaseException | None
    querier: SessionTranscript
    responder: SessionTranscript


def run_session(g1, g2, spec: QuerySpec, q_rng=None, r_rng=None, serve=None) -> SessionRun:
    """Querier and responder over an in-memory socket pair; responder in a thread."""
    qc, rc = loopback_pair()
    box = {}

    def responder():
        try:
            if serve is not None:
                serve(g2, rc)
            else:
                serve_session(g2, rc, rng=r_rng)
        except BaseException as exc:
            box["error"] = exc
        finally:
            rc.close()

    t = threading.Thread(target=responder)
    t.start()
    result = error = None
    try:
        result = query(spec, g1, qc, q_rng)
    except BaseException as exc:
        error = exc
    finally:
        qc.close()
        t.join(timeout=60)
    return SessionRun(result, error, box.get("error"), qc.transcript, rc.transcript)


def random_nonadjacent_pair(rng: random.Random, g1: Graph, g2: Graph, nodes):
    while True:
        x, y = rng.sample(nodes, 2)
        if not g1.has_edge(x, y) and not g2.has_edge(x, y):
            return x, y


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance verdicts as one line per criterion."""
    import test_acceptance  # noqa: PLC0415  (only present when collected)

    if test_acceptance.VERDICTS:
        terminalreporter.section("acceptance criteria")
        for num in sorted(test_acceptance.VERDICTS):
            terminalreporter.write_line(test_acceptance.VERDICTS[num])
