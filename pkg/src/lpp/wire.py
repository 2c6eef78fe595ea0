"""Framed binary messages and the byte-stream channel that carries them.

Frame layout: ``len (4 bytes BE) || type (1 byte) || body`` where ``len``
counts the type byte plus the body. Every group element on the wire is
fixed-width big-endian and is checked for subgroup membership on decode.
"""

from __future__ import annotations

import socket
import struct
import time
from dataclasses import dataclass, field
from typing import Callable, ClassVar, Union

from .errors import DecodeError, ProtocolViolation, SessionAborted
from .group import GroupParams

PROTOCOL_VERSION = 1
MAX_FRAME = 64 * 1024 * 1024
PARAMS_CODES = {"toy": 0, "secure": 1}
MODE_CODES = {"psi": 0, "he": 1}

Ciphertext = tuple[int, int]


@dataclass(frozen=True)
class SessionInit:
    TYPE: ClassVar[int] = 0x01
    params_name: str
    mode: str
    x_id: bytes
    y_id: bytes
    protocol_version: int = PROTOCOL_VERSION


@dataclass(frozen=True)
class Halt:
    TYPE: ClassVar[int] = 0x02


@dataclass(frozen=True)
class Local2Card:
    TYPE: ClassVar[int] = 0x03
    count: int


@dataclass(frozen=True)
class PsiClientMasked:
    TYPE: ClassVar[int] = 0x04
    psi_index: int
    elements: tuple[int, ...]


@dataclass(frozen=True)
class PsiServerResponse:
    TYPE: ClassVar[int] = 0x05
    psi_index: int
    remasked: tuple[int, ...]
    tags: tuple[bytes, ...]


@dataclass(frozen=True)
class Close:
    TYPE: ClassVar[int] = 0x06


@dataclass(frozen=True)
class Abort:
    TYPE: ClassVar[int] = 0x07
    reason: str


@dataclass(frozen=True)
class HeQuerierSets:
    """Querier's public key, encrypted ids of nx1, ny1 and local1, and E(|local1|)."""

    TYPE: ClassVar[int] = 0x10
    pk: int
    x_cts: tuple[Ciphertext, ...]
    y_cts: tuple[Ciphertext, ...]
    local_cts: tuple[Ciphertext, ...]
    local1_card: Ciphertext


@dataclass(frozen=True)
class HePooledMatrix:
    TYPE: ClassVar[int] = 0x11
    cts: tuple[Ciphertext, ...]


@dataclass(frozen=True)
class HeIndicatorReturn:
    TYPE: ClassVar[int] = 0x12
    cts: tuple[Ciphertext, ...]


@dataclass(frozen=True)
class HeFinalCn:
    TYPE: ClassVar[int] = 0x13
    bound: int
    ct: Ciphertext


Message = Union[SessionInit, Halt, Local2Card, PsiClientMasked, PsiServerResponse, Close, Abort,
                HeQuerierSets, HePooledMatrix, HeIndicatorReturn, HeFinalCn]

MESSAGE_TYPES: dict[int, type] = {
    cls.TYPE: cls for cls in (SessionInit, Halt, Local2Card, PsiClientMasked, PsiServerResponse,
                              Close, Abort, HeQuerierSets, HePooledMatrix, HeIndicatorReturn,
                              HeFinalCn)
}
_NEEDS_PARAMS = {PsiClientMasked, PsiServerResponse, HeQuerierSets, HePooledMatrix,
                 HeIndicatorReturn, HeFinalCn}


def _u32(n: int) -> bytes:
    if not 0 <= n < 2**32:
        raise ValueError(f"{n} does not fit in 4 bytes")
    return struct.pack(">I", n)


def _id(b: bytes) -> bytes:
    if len(b) >= 2**16:
        raise ValueError("node id longer than 65535 bytes")
    return struct.pack(">H", len(b)) + b


def _elements(params: GroupParams, values) -> bytes:
    return b"".join(params.encode_element(v) for v in values)


def _ct(params: GroupParams, ct: Ciphertext) -> bytes:
    return params.encode_element(ct[0]) + params.encode_element(ct[1])


def _cts(params: GroupParams, cts) -> bytes:
    return _u32(len(cts)) + b"".join(_ct(params, ct) for ct in cts)


def encode_body(msg: Message, params: GroupParams | None = None) -> bytes:
    if type(msg) in _NEEDS_PARAMS and params is None:
        raise ValueError(f"{type(msg).__name__} needs group params to encode")
    if isinstance(msg, SessionInit):
        return (bytes([msg.protocol_version, PARAMS_CODES[msg.params_name], MODE_CODES[msg.mode]])
                + _id(msg.x_id) + _id(msg.y_id))
    if isinstance(msg, (Halt, Close)):
        return b""
    if isinstance(msg, Local2Card):
        return _u32(msg.count)
    if isinstance(msg, PsiClientMasked):
        return bytes([msg.psi_index]) + _u32(len(msg.elements)) + _elements(params, msg.elements)
    if isinstance(msg, PsiServerResponse):
        return (bytes([msg.psi_index]) + _u32(len(msg.remasked)) + _elements(params, msg.remasked)
                + _u32(len(msg.tags)) + b"".join(msg.tags))
    if isinstance(msg, Abort):
        reason = msg.reason.encode("utf-8")[:0xFFFF]
        return struct.pack(">H", len(reason)) + reason
    if isinstance(msg, HeQuerierSets):
        return (params.encode_element(msg.pk) + _cts(params, msg.x_cts) + _cts(params, msg.y_cts)
                + _cts(params, msg.local_cts) + _ct(params, msg.local1_card))
    if isinstance(msg, (HePooledMatrix, HeIndicatorReturn)):
        return _cts(params, msg.cts)
    if isinstance(msg, HeFinalCn):
        return _u32(msg.bound) + _ct(params, msg.ct)
    raise TypeError(f"not a wire message: {msg!r}")


def encode_frame(msg: Message, params: GroupParams | None = None) -> bytes:
    body = encode_body(msg, params)
    return _u32(len(body) + 1) + bytes([msg.TYPE]) + body


class _Reader:
    def __init__(self, body: bytes):
        self.body = body
        self.pos = 0

    def take(self, n: int) -> bytes:
        if self.pos + n > len(self.body):
            raise DecodeError("truncated message body")
        out = self.body[self.pos:self.pos + n]
        self.pos += n
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u16(self) -> int:
        return struct.unpack(">H", self.take(2))[0]

    def u32(self) -> int:
        return struct.unpack(">I", self.take(4))[0]

    def element(self, params: GroupParams) -> int:
        return params.decode_element(self.take(params.element_byte_len))

    def elements(self, params: GroupParams, count: int) -> tuple[int, ...]:
        if count * params.element_byte_len > len(self.body) - self.pos:
            raise DecodeError("element count exceeds message body")
        return tuple(self.element(params) for _ in range(count))

    def ct(self, params: GroupParams) -> Ciphertext:
        return self.element(params), self.element(params)

    def cts(self, params: GroupParams) -> tuple[Ciphertext, ...]:
        count = self.u32()
        if count * 2 * params.element_byte_len > len(self.body) - self.pos:
            raise DecodeError("ciphertext count exceeds message body")
        return tuple(self.ct(params) for _ in range(count))

    def done(self) -> None:
        if self.pos != len(self.body):
            raise DecodeError(f"{len(self.body) - self.pos} trailing bytes in message body")


def _code(table: dict[str, int], code: int, what: str) -> str:
    for name, c in table.items():
        if c == code:
            return name
    raise DecodeError(f"unknown {what} code {code}")


def decode_body(type_byte: int, body: bytes, params: GroupParams | None = None) -> Message:
    cls = MESSAGE_TYPES.get(type_byte)
    if cls is None:
        raise DecodeError(f"unknown message type 0x{type_byte:02x}")
    if cls in _NEEDS_PARAMS and params is None:
        raise ProtocolViolation(f"{cls.__name__} received before session parameters were agreed")
    r = _Reader(body)
    msg: Message
    if cls is SessionInit:
        version = r.u8()
        if version != PROTOCOL_VERSION:
            raise DecodeError(f"unsupported protocol version {version}")
        params_name = _code(PARAMS_CODES, r.u8(), "params")
        mode = _code(MODE_CODES, r.u8(), "mode")
        x_id = r.take(r.u16())
        y_id = r.take(r.u16())
        msg = SessionInit(params_name, mode, x_id, y_id, version)
    elif cls in (Halt, Close):
        msg = cls()
    elif cls is Local2Card:
        msg = Local2Card(r.u32())
    elif cls is PsiClientMasked:
        index = r.u8()
        msg = PsiClientMasked(index, r.elements(params, r.u32()))
    elif cls is PsiServerResponse:
        index = r.u8()
        remasked = r.elements(params, r.u32())
        n_tags = r.u32()
        if n_tags * params.tag_byte_len > len(body) - r.pos:
            raise DecodeError("tag count exceeds message body")
        tags = tuple(r.take(params.tag_byte_len) for _ in range(n_tags))
        msg = PsiServerResponse(index, remasked, tags)
    elif cls is Abort:
        raw = r.take(r.u16())
        msg = Abort(raw.decode("utf-8", errors="replace"))
    elif cls is HeQuerierSets:
        pk = r.element(params)
        msg = HeQuerierSets(pk, r.cts(params), r.cts(params), r.cts(params), r.ct(params))
    elif cls in (HePooledMatrix, HeIndicatorReturn):
        msg = cls(r.cts(params))
    else:
        bound = r.u32()
        msg = HeFinalCn(bound, r.ct(params))
    r.done()
    return msg


def decode_frame(data: bytes, params: GroupParams | None = None) -> tuple[Message, bytes]:
    """Decode one frame from the front of ``data``; returns the message and the rest."""
    if len(data) < 4:
        raise DecodeError("truncated frame header")
    length = struct.unpack(">I", data[:4])[0]
    if length < 1:
        raise DecodeError("frame length must cover the type byte")
    if length > MAX_FRAME:
        raise DecodeError(f"frame of {length} bytes exceeds limit")
    if len(data) < 4 + length:
        raise DecodeError("truncated frame")
    return decode_body(data[4], data[5:4 + length], params), data[4 + length:]


@dataclass(frozen=True)
class TranscriptEntry:
    direction: str  # "sent" or "recv"
    message: Message
    timestamp_ns: int
    raw: bytes


@dataclass
class SessionTranscript:
    entries: list[TranscriptEntry] = field(default_factory=list)
    outcome: str = "open"  # completed | halted-direct-neighbour | aborted

    def messages(self, direction: str | None = None) -> list[Message]:
        return [e.message for e in self.entries if direction in (None, e.direction)]

    def count(self, cls: type, direction: str | None = None) -> int:
        return sum(isinstance(m, cls) for m in self.messages(direction))

    def raw_bytes(self, direction: str | None = None) -> bytes:
        return b"".join(e.raw for e in self.entries if direction in (None, e.direction))


class ConnectionClosed(ProtocolViolation):
    pass


class Channel:
    """Framed message channel over a connected stream socket.

    Every frame sent or received is appended to ``transcript``. ``params``
    must be set before any element-carrying message is exchanged.
    """

    def __init__(self, sock: socket.socket, params: GroupParams | None = None,
                 clock: Callable[[], int] = time.perf_counter_ns):
        self.sock = sock
        self.params = params
        self.transcript = SessionTranscript()
        self._clock = clock

    def send(self, msg: Message) -> None:
        frame = encode_frame(msg, self.params)
        self.sock.sendall(frame)
        self.transcript.entries.append(TranscriptEntry("sent", msg, self._clock(), frame))

    def _read_exact(self, n: int) -> bytes:
        buf = bytearray()
        while len(buf) < n:
            chunk = self.sock.recv(min(n - len(buf), 1 << 20))
            if not chunk:
                if buf:
                    raise DecodeError("connection closed mid-frame (truncated frame)")
                raise ConnectionClosed("connection closed by peer")
            buf += chunk
        return bytes(buf)

    def recv(self) -> Message:
        header = self._read_exact(4)
        length = struct.unpack(">I", header)[0]
        if length < 1 or length > MAX_FRAME:
            raise DecodeError(f"bad frame length {length}")
        try:
            rest = self._read_exact(length)
        except ConnectionClosed:
            raise DecodeError("connection closed mid-frame (truncated frame)") from None
        msg = decode_body(rest[0], rest[1:], self.params)
        self.transcript.entries.append(TranscriptEntry("recv", msg, self._clock(), header + rest))
        return msg

    def expect(self, *classes: type) -> Message:
        msg = self.recv()
        if isinstance(msg, Abort):
            raise SessionAborted(msg.reason)
        if not isinstance(msg, classes):
            names = "/".join(c.__name__ for c in classes)
            raise ProtocolViolation(f"expected {names}, got {type(msg).__name__}")
        return msg

    def abort(self, reason: str) -> None:
        try:
            self.send(Abort(reason))
        except OSError:
            pass

    def close(self) -> None:
        try:
            self.sock.shutdown(socket.SHUT_RDWR)
        except OSError:
            pass
        self.sock.close()

    def __enter__(self) -> Channel:
        return self

    def __exit__(self, *exc) -> None:
        self.close()


def loopback_pair(params: GroupParams | None = None) -> tuple[Channel, Channel]:
    """Two connected in-memory channels (a ``socketpair``)."""
    a, b = socket.socketpair()
    return Channel(a, params), Channel(b, params)


def connect(host: str, port: int, params: GroupParams | None = None,
            timeout: float | None = 30.0) -> Channel:
    sock = socket.create_connection((host, port), timeout=timeout)
    sock.setsockopt(socket.IPPROTO_TCP, socket.TCP_NODELAY, 1)
    return Channel(sock, params)
