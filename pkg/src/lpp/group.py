"""Prime-order subgroup of Z_p^*, exponent arithmetic mod q, and the two hash oracles.

Elements and scalars are plain ints. Exponentiation goes through gmpy2.
"""

from __future__ import annotations

import hashlib
import os
import random
import secrets
from dataclasses import dataclass
from functools import cached_property
from typing import ClassVar

import gmpy2

from . import _params
from .errors import DecodeError, InvalidInput, NoInverse

H1_LABEL = b"LPP-H1"
H2_LABEL = b"LPP-H2"

_system_rng = secrets.SystemRandom()


def _resolve_rng(rng: random.Random | None) -> random.Random:
    return _system_rng if rng is None else rng


@dataclass(frozen=True)
class GroupParams:
    name: str
    p: int
    q: int
    g: int

    tag_byte_len: ClassVar[int] = 32

    @cached_property
    def element_byte_len(self) -> int:
        return (self.p.bit_length() + 7) // 8

    @cached_property
    def scalar_byte_len(self) -> int:
        return (self.q.bit_length() + 7) // 8

    @cached_property
    def cofactor(self) -> int:
        return (self.p - 1) // self.q

    def validate(self) -> None:
        """Raise ``InvalidInput`` unless p, q, g form a valid order-q subgroup."""
        if (self.p - 1) % self.q:
            raise InvalidInput("q does not divide p-1")
        if not (gmpy2.is_prime(self.p, 40) and gmpy2.is_prime(self.q, 40)):
            raise InvalidInput("p or q is not prime")
        if self.g == 1 or not self.is_member(self.g):
            raise InvalidInput("g does not generate the order-q subgroup")

    def is_member(self, v: int) -> bool:
        return 0 < v < self.p and gmpy2.powmod(v, self.q, self.p) == 1

    def exp(self, e: int, s: int) -> int:
        return int(gmpy2.powmod(e, s % self.q, self.p))

    def mul(self, a: int, b: int) -> int:
        return a * b % self.p

    def inv(self, e: int) -> int:
        return int(gmpy2.invert(e, self.p))

    def scalar_inv(self, s: int) -> int:
        s %= self.q
        if s == 0:
            raise NoInverse("zero scalar has no inverse mod q")
        return int(gmpy2.invert(s, self.q))

    def rand_scalar(self, rng: random.Random | None = None) -> int:
        """Uniform in [1, q-1]."""
        return _resolve_rng(rng).randrange(1, self.q)

    def encode_element(self, v: int) -> bytes:
        return v.to_bytes(self.element_byte_len, "big")

    def decode_element(self, data: bytes) -> int:
        if len(data) != self.element_byte_len:
            raise DecodeError(f"element must be {self.element_byte_len} bytes, got {len(data)}")
        v = int.from_bytes(data, "big")
        if not self.is_member(v):
            raise DecodeError("element is not in the order-q subgroup")
        return v

    def encode_scalar(self, s: int) -> bytes:
        return (s % self.q).to_bytes(self.scalar_byte_len, "big")

    def decode_scalar(self, data: bytes) -> int:
        if len(data) != self.scalar_byte_len:
            raise DecodeError(f"scalar must be {self.scalar_byte_len} bytes")
        s = int.from_bytes(data, "big")
        if s >= self.q:
            raise DecodeError("scalar not reduced mod q")
        return s


TOY = GroupParams("toy", _params.TOY_P, _params.TOY_Q, _params.TOY_G)
SECURE = GroupParams("secure", _params.SECURE_P, _params.SECURE_Q, _params.SECURE_G)
PARAMS = {"toy": TOY, "secure": SECURE}


def get_params(name: str | None = None) -> GroupParams:
    """Look up a parameter set by name; ``LPP_PARAMS`` picks the default."""
    if name is None:
        name = os.environ.get("LPP_PARAMS", "toy")
    try:
        return PARAMS[name]
    except KeyError:
        raise InvalidInput(f"unknown parameter set {name!r} (expected toy or secure)") from None


def _labelled(label: bytes, payload: bytes) -> bytes:
    return bytes([len(label)]) + label + payload


def _expand(data: bytes, length: int) -> bytes:
    # SHA-256 in counter mode
    out = bytearray()
    block = 0
    while len(out) < length:
        out += hashlib.sha256(block.to_bytes(4, "big") + data).digest()
        block += 1
    return bytes(out[:length])


def hash_to_group(ident: bytes | str, params: GroupParams) -> int:
    """Map an identifier into the subgroup by cofactor exponentiation.

    The wide hash is ``element_byte_len + 16`` bytes so the reduction mod p
    is close to uniform. An identity result is re-hashed with a counter
    byte appended.
    """
    if isinstance(ident, str):
        ident = ident.encode("utf-8")
    if not ident:
        raise InvalidInput("identifier must be non-empty")
    data = _labelled(H1_LABEL, ident)
    for counter in range(256):
        attempt = data if counter == 0 else data + bytes([counter])
        m = int.from_bytes(_expand(attempt, params.element_byte_len + 16), "big") % params.p
        if m == 0:
            continue
        h = int(gmpy2.powmod(m, params.cofactor, params.p))
        if h != 1:
            return h
    raise RuntimeError("hash_to_group: no non-identity element after 256 attempts")


def tag_hash(e: int, params: GroupParams) -> bytes:
    return hashlib.sha256(_labelled(H2_LABEL, params.encode_element(e))).digest()


def rand_permutation(n: int, rng: random.Random | None = None) -> list[int]:
    """Uniform permutation of ``range(n)`` (Fisher-Yates via ``Random.shuffle``)."""
    if n < 0:
        raise InvalidInput("permutation size must be >= 0")
    perm = list(range(n))
    _resolve_rng(rng).shuffle(perm)
    return perm

