"""One test per acceptance criterion.

Each test records a single PASS/FAIL line in VERDICTS before asserting, and
conftest prints the collected lines at the end of the run. With ``-s`` the
lines also appear inline as each criterion finishes.
"""

import hashlib
import random
import statistics
import time

from lpp import psi_ca
from lpp.bench import REFERENCE_SIZES, run_once, synthetic_graphs
from lpp.cn_protocol import CnBreakdown, QuerySpec, brute_force_cn
from lpp.errors import DecodeError, HaltedDirectNeighbour, ProtocolViolation
from lpp.graph import BaConfig, ba_generate, k_sweep_experiment, utility_experiment
from lpp.group import TOY, hash_to_group
from lpp.leakage import LeakageQuery, leakage_curve, log10_possibilities, possibilities
from lpp.wire import (HeFinalCn, HePooledMatrix, Halt, Local2Card, PsiClientMasked,
                      PsiServerResponse, decode_frame, encode_frame)

from conftest import random_nonadjacent_pair, run_session

VERDICTS: dict[int, str] = {}

# SHA-256 over every frame of the fixture session, in wire order, with the
# querier seeded by Random(1) and the responder by Random(2).
FIXTURE_SESSION_SHA256 = "c3c561323d6b4c076927a176527930eec55c2db43ef449e01825ad97ddf52713"
FIXTURE_SESSION_BYTES = 996


def verdict(num: int, ok: bool, detail: str) -> None:
    line = f"criterion {num:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
    VERDICTS[num] = line
    print(line)
    assert ok, line


def test_criterion_01_psi_ca_oracle():
    rng = random.Random(101)
    universe = [f"id{i}" for i in range(128)]
    failures = 0
    start = time.perf_counter()
    for _ in range(200):
        client = rng.sample(universe, rng.randint(0, 64))
        server = rng.sample(universe, rng.randint(0, 64))
        got = psi_ca.run_local(client, server, TOY, rng).cardinality
        failures += got != len(set(client) & set(server))
    elapsed = time.perf_counter() - start
    verdict(1, failures == 0 and elapsed < 60,
            f"200 pairs, {failures} mismatches, {elapsed:.1f}s (limit 60s)")


def test_criterion_02_cn_oracle():
    rng = random.Random(202)
    mismatches = 0
    for i in range(100):
        k = (2, 8, 22)[i % 3]
        g1 = ba_generate(BaConfig(200, k, seed=2 * i))
        g2 = ba_generate(BaConfig(200, k, seed=2 * i + 1))
        x, y = random_nonadjacent_pair(rng, g1, g2, g1.nodes)
        run = run_session(g1, g2, QuerySpec(x, y))
        mismatches += run.result != brute_force_cn(g1, g2, x, y)
    verdict(2, mismatches == 0, f"100 BA pairs (n=200, k in 2/8/22), {mismatches} mismatches")


def test_criterion_03_fixture(fixture_graphs):
    g1, g2 = fixture_graphs
    got = run_session(g1, g2, QuerySpec("x", "y")).result
    expected = CnBreakdown(local1=1, local2=2, crossover1=1, crossover2=1, overlap=1, cn=4)
    # Same formula fed with raw neighbour sets, no set-difference step.
    n1x, n1y = g1.neighbours("x"), g1.neighbours("y")
    n2x, n2y = g2.neighbours("x"), g2.neighbours("y")
    l1, l2 = n1x & n1y, n2x & n2y
    uncorrected = len(l1) + len(l2) + len(n1x & n2y) + len(n1y & n2x) - len(l1 & l2)
    union_cn = len((n1x | n2x) & (n1y | n2y))
    verdict(3, got == expected and uncorrected == 6 and union_cn == 4,
            f"{got}; uncorrected formula gives {uncorrected}")


def test_criterion_04_halt_rule():
    rng = random.Random(404)
    total = halted = 0
    for i in range(60):
        g1 = ba_generate(BaConfig(60, 3, seed=i))
        g2 = ba_generate(BaConfig(60, 3, seed=1000 + i))
        x, y = random_nonadjacent_pair(rng, g1, g2, g1.nodes)
        g2.add_edge(x, y)
        for mode in ("psi", "he"):
            run = run_session(g1, g2, QuerySpec(x, y, mode))
            total += 1
            types = {type(m) for m in run.querier.messages()}
            clean = (isinstance(run.error, HaltedDirectNeighbour)
                     and Halt in types
                     and not types & {PsiClientMasked, PsiServerResponse, HePooledMatrix}
                     and run.responder.outcome == "halted-direct-neighbour")
            halted += clean
    # When the querier holds the edge as well it stops before sending anything.
    g1 = ba_generate(BaConfig(60, 3, seed=7))
    u, v = next(iter(g1.edges()))
    both = run_session(g1, g1, QuerySpec(u, v))
    silent = isinstance(both.error, HaltedDirectNeighbour) and not both.querier.entries
    verdict(4, halted == total and silent,
            f"{halted}/{total} responder-edge sessions halted with no PSI traffic; "
            f"querier-edge session sent {len(both.querier.entries)} frames")


def test_criterion_05_performance_shape():
    g1, g2 = synthetic_graphs(*REFERENCE_SIZES, seed=5)
    run_once(g1, g2)  # warm-up
    ref_ms = statistics.fmean(run_once(g1, g2)["total"] for _ in range(3))

    xs, ys = [], []
    for s in (32, 64, 128, 256):
        g1, g2 = synthetic_graphs(s, s, s, s, seed=s)
        for _ in range(3):
            xs.append(4 * s)
            ys.append(run_once(g1, g2)["total"])
    r2 = statistics.correlation(xs, ys) ** 2
    verdict(5, ref_ms <= 5000 and r2 >= 0.9,
            f"reference sizes {ref_ms:.0f} ms (limit 5000), linear fit R^2={r2:.4f} (min 0.9)")


def test_criterion_06_utility():
    start = time.perf_counter()
    rows = utility_experiment(4039, 22, seeds=range(5))
    elapsed = time.perf_counter() - start
    per_graph = [float(v) for r in rows for v in (r.avg_graph1, r.avg_graph2)]
    union = [float(r.avg_union) for r in rows]
    ok = (all(0.6 <= v <= 1.2 for v in per_graph) and all(2.3 <= v <= 4.3 for v in union)
          and all(r.avg_union > max(r.avg_graph1, r.avg_graph2) for r in rows)
          and elapsed <= 600)
    verdict(6, ok, f"per-graph {min(per_graph):.3f}..{max(per_graph):.3f} in [0.6,1.2], "
                   f"union {min(union):.3f}..{max(union):.3f} in [2.3,4.3], {elapsed:.1f}s")


def test_criterion_07_k_sweep():
    rows = k_sweep_experiment(200, 22, [2, 6, 10, 14, 18, 22], seeds=range(10))
    diffs = [r.avg_union - r.avg_graph2 for r in rows]
    ok = all(b <= a for a, b in zip(diffs, diffs[1:]))
    verdict(7, ok, "union-minus-graph2 by k: "
                   + ", ".join(f"{r.k}:{d:.2f}" for r, d in zip(rows, diffs)))


def test_criterion_08_leakage():
    curve = [count for _, count in leakage_curve(8)]
    big = log10_possibilities(LeakageQuery(37377, 50))
    ok = (possibilities(LeakageQuery(8, 3)) == 56
          and curve == [1, 8, 28, 56, 70, 56, 28, 8, 1]
          and sum(curve) == 256 and big > 100)
    verdict(8, ok, f"C(8,3)={possibilities(LeakageQuery(8, 3))}, curve(8)={curve}, "
                   f"log10 C(37377,50)={big:.3f}")


def test_criterion_09_he_variant():
    rng = random.Random(909)
    mismatches = leaks = 0
    for i in range(50):
        k = (2, 8, 22)[i % 3]
        g1 = ba_generate(BaConfig(100, k, seed=2 * i))
        g2 = ba_generate(BaConfig(100, k, seed=2 * i + 1))
        x, y = random_nonadjacent_pair(rng, g1, g2, g1.nodes)
        oracle = brute_force_cn(g1, g2, x, y)
        he_run = run_session(g1, g2, QuerySpec(x, y, "he"))
        psi_run = run_session(g1, g2, QuerySpec(x, y, "psi"))
        mismatches += not (he_run.result == psi_run.result.cn == oracle.cn)
        received = he_run.querier.messages("recv")
        final = received[-1] if received else None
        leaks += not ([type(m) for m in received] == [HePooledMatrix, HeFinalCn]
                      and final.bound & (final.bound - 1) == 0)
    verdict(9, mismatches == 0 and leaks == 0,
            f"50 pairs (n=100), {mismatches} mode mismatches, {leaks} transcripts carrying "
            "more than the pooled matrix and the encrypted total")


def test_criterion_10_wire(fixture_graphs):
    checks = {}
    checks["Local2Card(3)"] = encode_frame(Local2Card(3)).hex() == "000000050300000003"

    g1, g2 = fixture_graphs
    run = run_session(g1, g2, QuerySpec("x", "y"), random.Random(1), random.Random(2))
    raw = run.querier.raw_bytes()
    checks["fixture session"] = (hashlib.sha256(raw).hexdigest() == FIXTURE_SESSION_SHA256
                                 and len(raw) == FIXTURE_SESSION_BYTES
                                 and raw == run.responder.raw_bytes())
    checks["frame order"] = [type(m).__name__ for m in run.querier.messages()] == [
        "SessionInit", "Local2Card",
        "PsiClientMasked", "PsiServerResponse",
        "PsiClientMasked", "PsiServerResponse",
        "PsiClientMasked", "PsiServerResponse",
        "Close"]

    frame = encode_frame(PsiClientMasked(1, (hash_to_group("v", TOY),)), TOY)

    def rejects(data, exc=ProtocolViolation):
        try:
            decode_frame(data, TOY)
        except exc:
            return True
        return False

    checks["truncated"] = all(rejects(frame[:cut], DecodeError) for cut in (0, 3, 4, 10, len(frame) - 1))
    checks["unknown type"] = rejects(b"\x00\x00\x00\x01\x7f", DecodeError)
    non_member = 2  # 2^q mod p != 1 for the toy group
    bad = bytearray(frame)
    bad[-TOY.element_byte_len:] = non_member.to_bytes(TOY.element_byte_len, "big")
    checks["non-subgroup element"] = rejects(bytes(bad), DecodeError)
    failed = [name for name, ok in checks.items() if not ok]
    verdict(10, not failed, "checked " + ", ".join(checks) + (f"; failed: {failed}" if failed else ""))
