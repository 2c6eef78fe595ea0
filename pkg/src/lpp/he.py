"""Common neighbours under exponential ElGamal, hiding the individual components from the querier.

Equality tests use blinded differences: ``r * (a - b)`` under encryption is
zero exactly when the identifiers match and uniform otherwise. The responder
pools all comparison cells, pads the pool with dummy cells and shuffles
it. The querier turns each cell into an encrypted 0/1 indicator, and the
responder adds the indicators back up homomorphically.

What the querier sees beyond cn: the pool size and the number of zero
cells in it, which is cr1 + cr2 + overlap plus a random count of zero
dummies.
"""

from __future__ import annotations

import logging
import random
from dataclasses import dataclass, field
from typing import Sequence

from .cn_protocol import PreparedSets, QuerySpec, _guarded, prepare_inputs, receive_init
from .errors import HaltedDirectNeighbour, InvalidInput, OutOfRange, ProtocolViolation
from .graph import Graph
from .group import GroupParams, _resolve_rng, get_params, hash_to_group, rand_permutation, tag_hash
from .wire import (Channel, Ciphertext, Close, HeFinalCn, HeIndicatorReturn, HePooledMatrix,
                   HeQuerierSets, Halt, SessionInit, SessionTranscript)

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class HeKeyPair:
    sk: int
    pk: int
    params: GroupParams = field(repr=False)


def keygen(params: GroupParams, rng: random.Random | None = None) -> HeKeyPair:
    sk = params.rand_scalar(rng)
    return HeKeyPair(sk, params.exp(params.g, sk), params)


def encrypt(params: GroupParams, pk: int, m: int, rng: random.Random | None = None) -> Ciphertext:
    r = params.rand_scalar(rng)
    return params.exp(params.g, r), params.mul(params.exp(pk, r), params.exp(params.g, m))


def _plain_element(params: GroupParams, sk: int, ct: Ciphertext) -> int:
    c1, c2 = ct
    return params.mul(c2, params.inv(params.exp(c1, sk)))


def decrypt_is_zero(params: GroupParams, sk: int, ct: Ciphertext) -> bool:
    c1, c2 = ct
    return params.exp(c1, sk) == c2


def decrypt_small(params: GroupParams, sk: int, ct: Ciphertext, bound: int) -> int:
    """Recover m in [0, bound] by walking g^0, g^1, ... ; anything else is ``OutOfRange``."""
    if bound < 0:
        raise InvalidInput("bound must be >= 0")
    target = _plain_element(params, sk, ct)
    acc = 1
    for m in range(bound + 1):
        if acc == target:
            return m
        acc = params.mul(acc, params.g)
    raise OutOfRange(f"plaintext is not in [0, {bound}]")


def add(params: GroupParams, a: Ciphertext, b: Ciphertext) -> Ciphertext:
    return params.mul(a[0], b[0]), params.mul(a[1], b[1])


def neg(params: GroupParams, a: Ciphertext) -> Ciphertext:
    return params.inv(a[0]), params.inv(a[1])


def sub(params: GroupParams, a: Ciphertext, b: Ciphertext) -> Ciphertext:
    return add(params, a, neg(params, b))


def scalar_mul(params: GroupParams, ct: Ciphertext, s: int) -> Ciphertext:
    return params.exp(ct[0], s), params.exp(ct[1], s)


def rerandomize(params: GroupParams, pk: int, ct: Ciphertext,
                rng: random.Random | None = None) -> Ciphertext:
    return add(params, ct, encrypt(params, pk, 0, rng))


def trivial(params: GroupParams, m: int) -> Ciphertext:
    """Encryption of m with zero randomness. Only safe as an operand."""
    return 1, params.exp(params.g, m)


ZERO_CT: Ciphertext = (1, 1)


def enc_id(ident: bytes | str, params: GroupParams) -> int:
    return int.from_bytes(tag_hash(hash_to_group(ident, params), params)[:16], "big") % params.q


def blinded_difference(params: GroupParams, pk: int, ct_a: Ciphertext, id_b: bytes | str,
                       r: int, rng: random.Random | None = None) -> Ciphertext:
    """E(r * (a - b)), rerandomized so the querier cannot recover g^r from c1."""
    if not 1 <= r < params.q:
        raise InvalidInput("blinding scalar must be in [1, q-1]")
    diff = add(params, ct_a, trivial(params, -enc_id(id_b, params)))
    return rerandomize(params, pk, scalar_mul(params, diff, r), rng)


def answer_pool(params: GroupParams, sk: int, pk: int, cts: Sequence[Ciphertext],
                rng: random.Random | None = None) -> list[Ciphertext]:
    """Querier step: E(1) for every zero cell, E(0) otherwise."""
    return [encrypt(params, pk, 1 if decrypt_is_zero(params, sk, ct) else 0, rng) for ct in cts]


MATRICES = ("crossover1", "crossover2", "overlap")


@dataclass
class HeResponderSession:
    """Responder state for one he-mode session.

    ``labels[i]`` names the matrix the i-th pooled cell came from, or is
    ``None`` for a dummy. ``perm`` maps wire position to pool position.
    """

    params: GroupParams
    pk: int
    sets: PreparedSets
    rng: random.Random | None = None
    labels: list[str | None] = field(default_factory=list)
    pairs: list[tuple[int, bytes] | None] = field(default_factory=list)
    perm: list[int] = field(default_factory=list)
    zero_dummies: int = 0

    def build_pool(self, msg: HeQuerierSets, dummies: int | None = None) -> list[Ciphertext]:
        p, rng = self.params, _resolve_rng(self.rng)
        mine = self.sets
        pool: list[Ciphertext] = []
        plan = [("crossover1", msg.x_cts, mine.ny),
                ("crossover2", msg.y_cts, mine.nx),
                ("overlap", msg.local_cts, mine.local)]
        for label, theirs, ours in plan:
            ours_sorted = sorted(ours)
            for i, ct in enumerate(theirs):
                for b in ours_sorted:
                    pool.append(blinded_difference(p, self.pk, ct, b, p.rand_scalar(rng), rng))
                    self.labels.append(label)
                    self.pairs.append((i, b))
        d = len(pool) if dummies is None else dummies
        self.zero_dummies = rng.randint(0, d)
        for j in range(d):
            m = 0 if j < self.zero_dummies else p.rand_scalar(rng)
            pool.append(encrypt(p, self.pk, m, rng))
            self.labels.append(None)
            self.pairs.append(None)
        self.perm = rand_permutation(len(pool), rng)
        return [pool[i] for i in self.perm]

    def aggregate(self, indicators: Sequence[Ciphertext]) -> dict[str, Ciphertext]:
        if len(indicators) != len(self.perm):
            raise ProtocolViolation(
                f"{len(indicators)} indicators returned for a pool of {len(self.perm)}")
        sums = {name: ZERO_CT for name in MATRICES}
        for pos, ind in enumerate(indicators):
            label = self.labels[self.perm[pos]]
            if label is not None:
                sums[label] = add(self.params, sums[label], ind)
        return sums

    def final_cn(self, local1_card: Ciphertext, sums: dict[str, Ciphertext]) -> Ciphertext:
        p = self.params
        ct = add(p, local1_card, trivial(p, len(self.sets.local)))
        ct = add(p, ct, sums["crossover1"])
        ct = add(p, ct, sums["crossover2"])
        ct = sub(p, ct, sums["overlap"])
        return rerandomize(p, self.pk, ct, self.rng)

    def public_bound(self) -> int:
        """Power of two >= min(|Γ2(x)|, |Γ2(y)|); cn never exceeds |Γ1(x)|+|Γ1(y)| + this."""
        s = self.sets
        size = min(len(s.nx), len(s.ny)) + len(s.local)
        return 1 << max(size - 1, 0).bit_length() if size else 0


def run_he_querier(spec: QuerySpec, graph1: Graph, channel: Channel,
                   rng: random.Random | None = None) -> int:
    """Querier side of he mode; returns cn only."""
    if spec.mode != "he":
        raise InvalidInput("run_he_querier needs a he-mode spec")
    mine = prepare_inputs(graph1, spec.x_id, spec.y_id, "querier")
    params = get_params(spec.params_name)
    channel.params = params

    def session() -> int:
        kp = keygen(params, rng)

        def enc_all(ids):
            return tuple(encrypt(params, kp.pk, enc_id(i, params), rng) for i in sorted(ids))

        channel.send(spec.init_message())
        channel.send(HeQuerierSets(kp.pk, enc_all(mine.nx), enc_all(mine.ny), enc_all(mine.local),
                                   encrypt(params, kp.pk, len(mine.local), rng)))
        reply = channel.expect(Halt, HePooledMatrix)
        if isinstance(reply, Halt):
            raise HaltedDirectNeighbour("responder")
        channel.send(HeIndicatorReturn(tuple(answer_pool(params, kp.sk, kp.pk, reply.cts, rng))))
        final = channel.expect(HeFinalCn)
        bound = len(mine.nx) + len(mine.ny) + 2 * len(mine.local) + final.bound
        try:
            cn = decrypt_small(params, kp.sk, final.ct, bound)
        except OutOfRange as exc:
            raise ProtocolViolation(f"final cn outside public bound: {exc}") from None
        channel.send(Close())
        channel.transcript.outcome = "completed"
        return cn

    return _guarded(channel, session)


def run_he_responder(spec: QuerySpec | None, graph2: Graph, channel: Channel,
                     rng: random.Random | None = None, init: SessionInit | None = None,
                     dummies: int | None = None) -> SessionTranscript:
    if init is None:
        init = receive_init(channel, spec)

    def session() -> SessionTranscript:
        if init.mode != "he":
            raise ProtocolViolation("run_he_responder handles he mode only")
        params = channel.params
        sets_msg = channel.expect(HeQuerierSets)
        try:
            mine = prepare_inputs(graph2, init.x_id, init.y_id, "responder")
        except HaltedDirectNeighbour:
            channel.send(Halt())
            channel.transcript.outcome = "halted-direct-neighbour"
            return channel.transcript
        state = HeResponderSession(params, sets_msg.pk, mine, rng)
        channel.send(HePooledMatrix(tuple(state.build_pool(sets_msg, dummies))))
        indicators = channel.expect(HeIndicatorReturn)
        sums = state.aggregate(indicators.cts)
        channel.send(HeFinalCn(state.public_bound(), state.final_cn(sets_msg.local1_card, sums)))
        channel.expect(Close)
        channel.transcript.outcome = "completed"
        return channel.transcript

    return _guarded(channel, session)
