"""Two-role PSI-CA over blind exponentiation.

The client learns ``|C & S|`` and nothing that ties a match back to one of
its own items: the server re-masks *and* shuffles the client's elements
before returning them.

Round trip::

    client_offline:  a_i = H(c_i)^rc
    server_offline:  tags = shuffle(H'(H(s_j)^rs))
    server_respond:  b   = shuffle(a_i^rs)
    client_finalize: |{H'(b_k^(1/rc))} & tags|
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import ProtocolViolation
from .group import GroupParams, hash_to_group, rand_permutation, tag_hash


def _dedup(items: Iterable[bytes | str]) -> list[bytes]:
    return list(dict.fromkeys(i.encode("utf-8") if isinstance(i, str) else i for i in items))


@dataclass
class PsiClientState:
    params: GroupParams
    r_c: int
    items: list[bytes]
    masked: list[int]


@dataclass
class PsiServerState:
    params: GroupParams
    r_s: int
    items: list[bytes]
    server_tags: list[bytes]
    rng: random.Random | None = field(default=None, repr=False)


@dataclass(frozen=True)
class PsiResult:
    cardinality: int


def client_offline(items: Iterable[bytes | str], params: GroupParams,
                   rng: random.Random | None = None) -> PsiClientState:
    items = _dedup(items)
    r_c = params.rand_scalar(rng)
    masked = [params.exp(hash_to_group(c, params), r_c) for c in items]
    return PsiClientState(params, r_c, items, masked)


def server_offline(items: Iterable[bytes | str], params: GroupParams,
                   rng: random.Random | None = None) -> PsiServerState:
    items = _dedup(items)
    r_s = params.rand_scalar(rng)
    tags = [tag_hash(params.exp(hash_to_group(s, params), r_s), params) for s in items]
    perm = rand_permutation(len(tags), rng)
    return PsiServerState(params, r_s, items, [tags[i] for i in perm], rng)


def server_respond(state: PsiServerState,
                   client_masked: Sequence[int]) -> tuple[list[int], list[bytes]]:
    params = state.params
    for a in client_masked:
        if not params.is_member(a):
            raise ProtocolViolation("client element outside the order-q subgroup")
    remasked = [params.exp(a, state.r_s) for a in client_masked]
    perm = rand_permutation(len(remasked), state.rng)
    return [remasked[i] for i in perm], list(state.server_tags)


def client_finalize(state: PsiClientState, remasked_shuffled: Sequence[int],
                    server_tags: Sequence[bytes]) -> PsiResult:
    params = state.params
    if len(remasked_shuffled) != len(state.masked):
        raise ProtocolViolation(
            f"server returned {len(remasked_shuffled)} elements for {len(state.masked)} sent")
    if any(len(t) != params.tag_byte_len for t in server_tags):
        raise ProtocolViolation("server tag has wrong length")
    unmask = params.scalar_inv(state.r_c)
    mine = {tag_hash(params.exp(b, unmask), params) for b in remasked_shuffled}
    return PsiResult(len(mine & set(server_tags)))


def run_local(client_items: Iterable[bytes | str], server_items: Iterable[bytes | str],
              params: GroupParams, rng: random.Random | None = None) -> PsiResult:
    """Both roles in one process, no wire. Handy for tests and benchmarks."""
    client = client_offline(client_items, params, rng)
    server = server_offline(server_items, params, rng)
    remasked, tags = server_respond(server, client.masked)
    return client_finalize(client, remasked, tags)
