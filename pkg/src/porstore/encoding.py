"""Byte-level encodings: little-endian counters and bitstream chunking.

The bitstream layout is MSB-first: byte 0's most significant bit is the
first bit of the stream.  Chunking a byte string into w-bit symbols pads
the tail with zero bits; the inverse truncates back to the recorded byte
length, so round-trips are exact.
"""

from __future__ import annotations


def le64(value: int) -> bytes:
    """Encode a non-negative integer as 8 little-endian bytes."""
    return value.to_bytes(8, "little")


def bytes_to_symbols(data: bytes, bits: int) -> list[int]:
    """Chunk `data` into `bits`-wide integers, zero-padding the tail."""
    if bits < 1:
        raise ValueError("symbol width must be positive")
    total_bits = 8 * len(data)
    count = (total_bits + bits - 1) // bits
    if count == 0:
        return []
    stream = int.from_bytes(data, "big")
    # Left-align the stream so symbol 0 holds the first `bits` bits.
    stream <<= count * bits - total_bits
    mask = (1 << bits) - 1
    return [(stream >> ((count - 1 - i) * bits)) & mask for i in range(count)]


def symbols_to_bytes(symbols: list[int], bits: int, byte_len: int) -> bytes:
    """Inverse of bytes_to_symbols: repack symbols and cut to byte_len."""
    if byte_len == 0:
        return b""
    stream = 0
    for s in symbols:
        stream = (stream << bits) | s
    total_bits = len(symbols) * bits
    pad = -total_bits % 8
    stream <<= pad
    raw = stream.to_bytes((total_bits + pad) // 8, "big")
    return raw[:byte_len]
