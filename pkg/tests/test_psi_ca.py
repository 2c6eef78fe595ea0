import dataclasses
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from lpp import psi_ca
from lpp.errors import ProtocolViolation
from lpp.group import TOY, hash_to_group

small_sets = st.sets(st.integers(0, 30).map(lambda i: f"id{i}"), max_size=12)


def test_client_offline_shapes(params):
    assert psi_ca.client_offline([], params).masked == []
    state = psi_ca.client_offline(["v7"], params)
    assert state.masked == [params.exp(hash_to_group("v7", params), state.r_c)]
    assert 1 <= state.r_c < params.q
    state = psi_ca.client_offline([f"n{i}" for i in range(120)], params)
    assert len(state.masked) == 120


def test_client_offline_dedups(params):
    state = psi_ca.client_offline(["a", "b", "a"], params)
    assert state.items == [b"a", b"b"]
    assert len(state.masked) == 2


def test_server_offline_shapes(params):
    assert psi_ca.server_offline([], params).server_tags == []
    assert len(psi_ca.server_offline(["a", "a"], params).server_tags) == 1


def test_server_tags_multiset_ignores_input_order(params):
    items = [f"s{i}" for i in range(10)]
    a = psi_ca.server_offline(items, params, random.Random(1))
    rng = random.Random(1)
    b = psi_ca.server_offline(items[::-1], params, rng)
    # same r_s (same seed, drawn first) so the tag multisets must agree
    assert a.r_s == b.r_s
    assert Counter(a.server_tags) == Counter(b.server_tags)


def test_server_respond_empty(params):
    server = psi_ca.server_offline(["a", "b"], params)
    remasked, tags = psi_ca.server_respond(server, [])
    assert remasked == [] and tags == server.server_tags


def test_server_respond_remasks_and_shuffles(params):
    client = psi_ca.client_offline([f"c{i}" for i in range(8)], params)
    server = psi_ca.server_offline(["x"], params)
    remasked, _ = psi_ca.server_respond(server, client.masked)
    assert all(pow(o, params.q, params.p) == 1 for o in remasked)
    unmask = params.scalar_inv(client.r_c)
    got = Counter(params.exp(o, unmask) for o in remasked)
    want = Counter(params.exp(hash_to_group(c, params), server.r_s) for c in client.items)
    assert got == want


def test_server_respond_rejects_non_member(params):
    server = psi_ca.server_offline(["x"], params)
    with pytest.raises(ProtocolViolation):
        psi_ca.server_respond(server, [params.p - 1])


def test_client_finalize_length_mismatch(params):
    client = psi_ca.client_offline(["a", "b"], params)
    with pytest.raises(ProtocolViolation):
        psi_ca.client_finalize(client, client.masked[:1], [])


@pytest.mark.parametrize("client, server, expected", [
    (["1", "2", "3"], ["2", "3", "4"], 2),
    (["1", "2"], ["3", "4"], 0),
    ([f"n{i}" for i in range(6)], [f"n{i}" for i in range(6)], 6),
    ([], ["a"], 0),
    (["a"], [], 0),
])
def test_examples(params, client, server, expected):
    assert expected == len(set(client) & set(server))
    assert psi_ca.run_local(client, server, params).cardinality == expected


@settings(max_examples=30, deadline=None)
@given(small_sets, small_sets)
def test_oracle_equivalence(c, s):
    result = psi_ca.run_local(sorted(c), sorted(s), TOY).cardinality
    assert result == len(c & s)
    assert result <= min(len(c), len(s))


@settings(max_examples=10, deadline=None)
@given(small_sets, small_sets, st.randoms(use_true_random=False))
def test_order_independence(c, s, rnd):
    c1, s1 = list(c), list(s)
    rnd.shuffle(c1)
    rnd.shuffle(s1)
    assert psi_ca.run_local(c1, s1, TOY).cardinality == psi_ca.run_local(sorted(c), sorted(s), TOY).cardinality


def test_result_carries_only_cardinality():
    assert [f.name for f in dataclasses.fields(psi_ca.PsiResult)] == ["cardinality"]


class RecordingRandom(random.Random):
    def __init__(self, seed):
        super().__init__(seed)
        self.shuffled = []

    def shuffle(self, x):
        self.shuffled.append(len(x))
        super().shuffle(x)


def test_fresh_permutation_and_masks_per_session(params):
    rng = RecordingRandom(5)
    client = psi_ca.client_offline(["a", "b", "c"], params)
    server = psi_ca.server_offline(["b", "c", "d", "e"], params, rng)
    psi_ca.server_respond(server, client.masked)
    # one shuffle for the tag list, one fresh one per response
    assert rng.shuffled == [4, 3]
    psi_ca.server_respond(server, client.masked)
    assert rng.shuffled == [4, 3, 3]
    other = psi_ca.server_offline(["b", "c", "d", "e"], params)
    assert other.r_s != server.r_s


def test_exponentiation_count_is_linear(params, monkeypatch):
    calls = Counter()
    real_exp, real_h = type(params).exp, psi_ca.hash_to_group

    def counting_exp(self, e, s):
        calls["exp"] += 1
        return real_exp(self, e, s)

    def counting_h(ident, p):
        calls["hash"] += 1
        return real_h(ident, p)

    monkeypatch.setattr(type(params), "exp", counting_exp)
    monkeypatch.setattr(psi_ca, "hash_to_group", counting_h)
    for n_c, n_s in [(5, 7), (10, 14), (20, 28)]:
        calls.clear()
        psi_ca.run_local([f"c{i}" for i in range(n_c)], [f"s{i}" for i in range(n_s)], params)
        assert calls["hash"] == n_c + n_s
        assert calls["exp"] == 3 * n_c + n_s
