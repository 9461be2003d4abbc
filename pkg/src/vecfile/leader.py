"""The leader binary format.

Layout: a 24-byte header of three unsigned 64-bit little-endian integers
(magic, vocab size n, vector size d), then n back-to-back records of
(4-byte LE word length, UTF-8 word bytes, d little-endian float32s).
The length prefix counts UTF-8 bytes, never codepoints, so reading one
record is three exact-size consumes with no delimiter scanning. Words may
contain any bytes, including 0x20 and 0x0A.
"""

from __future__ import annotations

import struct
from collections.abc import Iterable
from dataclasses import dataclass

import numpy as np

from .bufio import ByteWindow
from .model import (BadMagicError, Embeddings, HeaderMismatchError,
                    InvalidUtf8Error, IoError, ReadOptions, TruncatedError)
from .records import ReadResult, RecordSink, concat_batches, gather_rows

#: Identifies a leader file; first 8 bytes, unsigned little-endian.
MAGIC = 38941

_HEADER = struct.Struct("<QQQ")
_WORD_LEN = struct.Struct("<I")

HEADER_SIZE = _HEADER.size  # 24
WORD_LEN_SIZE = _WORD_LEN.size  # the "3 extra bytes per word" vs one space


@dataclass(frozen=True)
class LeaderHeader:
    magic: int
    vocab_size: int
    vector_size: int


def read_leader_header(stream) -> LeaderHeader:
    """Read and validate the 24-byte header, leaving the stream at byte 24."""
    data = stream.read(HEADER_SIZE)
    if len(data) < HEADER_SIZE:
        raise TruncatedError(
            f"file too short for header: {len(data)} of {HEADER_SIZE} bytes",
            offset=len(data))
    return _validate_header(data)


def _validate_header(data: bytes) -> LeaderHeader:
    magic, n, d = _HEADER.unpack(data)
    if magic != MAGIC:
        raise BadMagicError(
            f"magic {magic:#x} does not match expected {MAGIC:#x}", offset=0)
    return LeaderHeader(magic, n, d)


def _check_counts(header: LeaderHeader) -> None:
    if header.vector_size < 1:
        raise HeaderMismatchError("header declares zero-dimensional vectors",
                                  offset=16)
    if header.vocab_size < 1:
        raise HeaderMismatchError("header declares an empty vocabulary",
                                  offset=8)


def read_leader_full(stream, opts: ReadOptions = ReadOptions()) -> ReadResult:
    """Streaming leader read with dedup/filter accounting."""
    win = ByteWindow(stream)
    header = _validate_header(win.take(HEADER_SIZE, "leader header"))
    _check_counts(header)
    n, d = header.vocab_size, header.vector_size
    vec_bytes = 4 * d
    sink = RecordSink(opts)
    offer = sink.offer
    errors = "strict" if opts.strict_utf8 else "surrogateescape"
    unpack_len = _WORD_LEN.unpack_from
    batches: list[np.ndarray] = []
    rec = 0
    while rec < n:
        buf = win.buf
        limit = len(buf)
        pos = win.pos
        offs: list[int] = []
        push = offs.append
        while rec < n and pos + 4 <= limit:
            word_len = unpack_len(buf, pos)[0]
            word_end = pos + 4 + word_len
            end = word_end + vec_bytes
            if end > limit:
                break
            try:
                word = buf[pos + 4:word_end].decode("utf-8", errors)
            except UnicodeDecodeError as exc:
                raise InvalidUtf8Error(
                    f"word bytes are not valid UTF-8: {exc.reason}",
                    offset=win.base + pos + 4) from None
            rec += 1
            if offer(word):
                push(word_end)
            pos = end
        win.pos = pos
        if offs:
            batches.append(gather_rows(buf, offs, d))
        if rec < n:
            if win.refill(4):
                word_len = unpack_len(win.buf, win.pos)[0]
                if not win.refill(4 + word_len + vec_bytes):
                    raise TruncatedError(
                        f"stream ended inside record {rec + 1}",
                        offset=win.base + len(win.buf))
                continue
            if win.available() == 0:
                raise HeaderMismatchError(
                    f"header declared {n} records, stream ended after {rec}",
                    offset=win.abs_pos)
            raise TruncatedError(
                f"stream ended inside record {rec + 1}'s length prefix",
                offset=win.base + len(win.buf))
    if not win.at_end():
        raise HeaderMismatchError(
            f"trailing bytes after the declared {n} records",
            offset=win.abs_pos)
    return sink.finish(concat_batches(batches, d), d)


def read_leader(stream, opts: ReadOptions = ReadOptions()) -> Embeddings:
    return read_leader_full(stream, opts).embeddings


_FLUSH_RECORDS = 4096


def write_leader(emb: Embeddings, stream) -> int:
    """Write header plus records in vocabulary order; returns bytes written."""
    if emb.n == 0:
        raise ValueError("refusing to write empty embeddings")
    matrix = emb.matrix.astype("<f4", copy=False)
    vec_bytes = 4 * emb.dim
    pack_len = _WORD_LEN.pack
    total = HEADER_SIZE
    pieces: list[bytes] = [_HEADER.pack(MAGIC, emb.n, emb.dim)]
    try:
        for i, word in enumerate(emb.words):
            raw = word.encode("utf-8", "surrogateescape")
            pieces.append(pack_len(len(raw)))
            pieces.append(raw)
            pieces.append(matrix[i].tobytes())
            total += 4 + len(raw) + vec_bytes
            if len(pieces) >= 3 * _FLUSH_RECORDS:
                stream.write(b"".join(pieces))
                pieces.clear()
        if pieces:
            stream.write(b"".join(pieces))
    except OSError as exc:
        raise IoError(f"write failed: {exc}") from exc
    return total


def expected_leader_size(word_byte_lengths: Iterable[int], d: int) -> int:
    """Pure size arithmetic: 24 + sum(4 + len + 4d) over the vocabulary."""
    if d < 1:
        raise ValueError("d must be positive")
    total = HEADER_SIZE
    for length in word_byte_lengths:
        if length < 0:
            raise ValueError("word byte lengths must be non-negative")
        total += 4 + length + 4 * d
    return total
