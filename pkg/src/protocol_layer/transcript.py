"""
Transcripts

Purpose: Record what every party sends to the coordinator, with bit-exact
width accounting, and serialize it for the harness and the CLI.

Wire format:
- one ASCII header line: protocol id followed by key=value fields (decimal ints or tokens)
- the message block: k fixed-width big-endian fields, packed MSB first, zero padded to a byte
- composite transcripts: '>I' factor count, then one '>I' length-prefixed block per factor
"""

import logging
import struct
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Union

from src.errors import OutOfRangeError, TranscriptFormatError

logger = logging.getLogger(__name__)

HeaderValue = Union[int, str]

_LENGTH = struct.Struct('>I')


def bit_width(n: int) -> int:
    """ceil(log2 n): bits needed for a value in [0, n)."""
    if n < 1:
        raise OutOfRangeError(f"bit width of an empty range ({n})")
    return (n - 1).bit_length()


@dataclass(frozen=True)
class Message:
    party: int
    value: int
    width: int


@dataclass
class Transcript:
    """
    One protocol run: header fields plus one fixed-width message per party.
    """

    protocol: str
    header: Dict[str, HeaderValue]
    messages: List[Message] = field(default_factory=list)

    @classmethod
    def from_values(cls, protocol: str, header: Dict[str, HeaderValue],
                    values: Sequence[int], width: int) -> "Transcript":
        for v in values:
            if v < 0 or v.bit_length() > width:
                raise TranscriptFormatError(f"message {v} does not fit in {width} bits")
        messages = [Message(i, int(v), width) for i, v in enumerate(values)]
        return cls(protocol, dict(header), messages)

    @property
    def total_bits(self) -> int:
        return sum(m.width for m in self.messages)

    @property
    def width(self) -> int:
        return self.messages[0].width if self.messages else 0

    @property
    def values(self) -> List[int]:
        return [m.value for m in self.messages]

    def summary(self) -> Dict[str, HeaderValue]:
        return {
            'protocol': self.protocol,
            **self.header,
            'messages': len(self.messages),
            'bits_per_party': self.width,
            'total_bits': self.total_bits,
        }

    def to_bytes(self) -> bytes:
        if len({m.width for m in self.messages}) > 1:
            raise TranscriptFormatError("messages of one transcript share a width")
        fields = [self.protocol]
        for key, value in self.header.items():
            if ' ' in str(value) or '=' in str(key):
                raise TranscriptFormatError(f"header field {key}={value} is not a token")
            fields.append(f"{key}={value}")
        fields.append(f"count={len(self.messages)}")
        fields.append(f"width={self.width}")
        head = (' '.join(fields) + '\n').encode('ascii')

        acc = 0
        for m in self.messages:
            acc = (acc << m.width) | m.value
        nbits = self.total_bits
        pad = -nbits % 8
        block = (acc << pad).to_bytes((nbits + pad) // 8, 'big')
        return head + block

    @classmethod
    def from_bytes(cls, data: bytes) -> "Transcript":
        head, sep, block = data.partition(b'\n')
        if not sep:
            raise TranscriptFormatError("missing header line")
        try:
            protocol, *pairs = head.decode('ascii').split(' ')
            header: Dict[str, HeaderValue] = {}
            for pair in pairs:
                key, value = pair.split('=', 1)
                header[key] = int(value) if value.lstrip('-').isdigit() else value
            count = int(header.pop('count'))
            width = int(header.pop('width'))
        except (UnicodeDecodeError, ValueError, KeyError) as e:
            raise TranscriptFormatError(f"malformed header: {e}") from e

        nbits = count * width
        if len(block) != (nbits + 7) // 8:
            raise TranscriptFormatError(
                f"message block has {len(block)} bytes, expected {(nbits + 7) // 8}"
            )
        acc = int.from_bytes(block, 'big') >> (-nbits % 8)
        mask = (1 << width) - 1
        values = [(acc >> (width * (count - 1 - i))) & mask for i in range(count)]
        logger.debug("decoded %s transcript: %d messages of %d bits", protocol, count, width)
        return cls.from_values(protocol, header, values, width)


@dataclass
class CompositeTranscript:
    """Per-factor transcripts of a run over Z_N, in factor order."""

    factors: List[Transcript] = field(default_factory=list)

    @property
    def total_bits(self) -> int:
        return sum(t.total_bits for t in self.factors)

    def summary(self) -> Dict[str, HeaderValue]:
        return {
            'protocol': 'composite',
            'factors': len(self.factors),
            'total_bits': self.total_bits,
        }

    def to_bytes(self) -> bytes:
        out = [_LENGTH.pack(len(self.factors))]
        for t in self.factors:
            block = t.to_bytes()
            out.append(_LENGTH.pack(len(block)))
            out.append(block)
        return b''.join(out)

    @classmethod
    def from_bytes(cls, data: bytes) -> "CompositeTranscript":
        if len(data) < _LENGTH.size:
            raise TranscriptFormatError("composite transcript is too short")
        (count,), offset = _LENGTH.unpack_from(data, 0), _LENGTH.size
        factors = []
        for _ in range(count):
            if len(data) < offset + _LENGTH.size:
                raise TranscriptFormatError("truncated factor length")
            (size,) = _LENGTH.unpack_from(data, offset)
            offset += _LENGTH.size
            if len(data) < offset + size:
                raise TranscriptFormatError("truncated factor block")
            factors.append(Transcript.from_bytes(data[offset:offset + size]))
            offset += size
        if offset != len(data):
            raise TranscriptFormatError(f"{len(data) - offset} trailing bytes")
        return cls(factors)
