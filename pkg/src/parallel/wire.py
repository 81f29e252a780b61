"""
Binary wire format for worker messages.

Every record is a little-endian u32 byte length followed by the body. The
body starts with a tag byte:

    1  BoxBatch    u16 sender, u8 initial, u32 box count, then per box
                   u32 depth, u16 n, n x (f64 lo, f64 hi)
    2  LoadReport  u16 sender, u32 load
    3  Token       u8 color, i64 count
    4  Terminate   (no payload)
"""
import struct
from typing import Iterator, List, Tuple

from src.interval.box import Box
from src.interval.interval import Interval
from src.parallel.messages import BoxBatch, Color, LoadReport, Message, Terminate, Token

TAG_BOX_BATCH = 1
TAG_LOAD_REPORT = 2
TAG_TOKEN = 3
TAG_TERMINATE = 4

_LENGTH = struct.Struct("<I")
_TAG = struct.Struct("<B")
_BATCH_HEADER = struct.Struct("<HBI")
_BOX_HEADER = struct.Struct("<IH")
_ENDPOINTS = struct.Struct("<dd")
_LOAD = struct.Struct("<HI")
_TOKEN = struct.Struct("<Bq")


class WireFormatError(ValueError):
    """Raised for truncated, oversized or unknown records"""


def _encode_body(message: Message) -> bytes:
    try:
        if isinstance(message, BoxBatch):
            parts = [_TAG.pack(TAG_BOX_BATCH),
                     _BATCH_HEADER.pack(message.sender, int(message.initial), len(message.boxes))]
            for box in message.boxes:
                parts.append(_BOX_HEADER.pack(box.depth, len(box)))
                for component in box.components:
                    parts.append(_ENDPOINTS.pack(component.lo, component.hi))
            return b"".join(parts)
        if isinstance(message, LoadReport):
            return _TAG.pack(TAG_LOAD_REPORT) + _LOAD.pack(message.sender, message.load)
        if isinstance(message, Token):
            return _TAG.pack(TAG_TOKEN) + _TOKEN.pack(message.color.value, message.count)
        if isinstance(message, Terminate):
            return _TAG.pack(TAG_TERMINATE)
    except struct.error as exc:
        raise WireFormatError(f"Cannot encode {type(message).__name__}: {exc}") from exc
    raise WireFormatError(f"Not a message: {message!r}")


def encode(message: Message) -> bytes:
    """Length-prefixed record for message"""
    body = _encode_body(message)
    return _LENGTH.pack(len(body)) + body


class _Reader:
    def __init__(self, data: bytes):
        self.data = data
        self.offset = 0

    def take(self, layout: struct.Struct) -> Tuple:
        end = self.offset + layout.size
        if end > len(self.data):
            raise WireFormatError(f"Truncated record: need {layout.size} bytes at offset {self.offset}")
        values = layout.unpack_from(self.data, self.offset)
        self.offset = end
        return values

    def finish(self):
        if self.offset != len(self.data):
            raise WireFormatError(f"{len(self.data) - self.offset} trailing bytes in record")


def _decode_body(body: bytes) -> Message:
    reader = _Reader(body)
    (tag,) = reader.take(_TAG)

    if tag == TAG_BOX_BATCH:
        sender, initial, count = reader.take(_BATCH_HEADER)
        boxes = []
        for _ in range(count):
            depth, n = reader.take(_BOX_HEADER)
            components = []
            for _ in range(n):
                lo, hi = reader.take(_ENDPOINTS)
                try:
                    components.append(Interval(lo, hi))
                except ValueError as exc:
                    raise WireFormatError(f"Invalid interval in record: {exc}") from exc
            boxes.append(Box(tuple(components), depth))
        if not boxes and not initial:
            raise WireFormatError("Empty non-initial BoxBatch")
        message = BoxBatch(sender, tuple(boxes), initial=bool(initial))
    elif tag == TAG_LOAD_REPORT:
        sender, load = reader.take(_LOAD)
        message = LoadReport(sender, load)
    elif tag == TAG_TOKEN:
        color, count = reader.take(_TOKEN)
        try:
            message = Token(Color(color), count)
        except ValueError as exc:
            raise WireFormatError(f"Unknown token color {color}") from exc
    elif tag == TAG_TERMINATE:
        message = Terminate()
    else:
        raise WireFormatError(f"Unknown message tag {tag}")

    reader.finish()
    return message


def decode(record: bytes) -> Message:
    """Decode exactly one length-prefixed record"""
    message, rest = decode_prefix(record)
    if rest:
        raise WireFormatError(f"{len(rest)} bytes after the record")
    return message


def decode_prefix(data: bytes) -> Tuple[Message, bytes]:
    """Decode the first record of data; return it and the remaining bytes"""
    if len(data) < _LENGTH.size:
        raise WireFormatError("Truncated length prefix")
    (length,) = _LENGTH.unpack_from(data, 0)
    end = _LENGTH.size + length
    if end > len(data):
        raise WireFormatError(f"Record claims {length} bytes but only {len(data) - _LENGTH.size} remain")
    return _decode_body(data[_LENGTH.size:end]), data[end:]


def iter_records(data: bytes) -> Iterator[Message]:
    """Decode a concatenation of records"""
    while data:
        message, data = decode_prefix(data)
        yield message


def encode_all(messages: List[Message]) -> bytes:
    return b"".join(encode(m) for m in messages)
