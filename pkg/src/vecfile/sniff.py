"""Format detection from leading bytes.

Decision order: leader magic first, then a w2v "n d" header line (with
the first record's shape separating text from binary), then a glove-style
word + floats line. A probe window caps the work on adversarial input;
the stream is always rewound to byte 0 before returning.

Known ambiguity: a d=1 glove file whose first word is an unsigned integer
looks exactly like a w2v header. The header interpretation wins here; the
CLI exposes --from to override.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

from .floatfmt import parse_f32
from .leader import HEADER_SIZE, MAGIC, _validate_header, read_leader_header
from .legacy import _W2V_HEADER, parse_w2v_header_line
from .model import (FormatKind, TruncatedError, UnknownFormatError, VecError)

PROBE_LIMIT = 1 << 20  # 1 MiB


@dataclass(frozen=True)
class SniffReport:
    kind: FormatKind
    vocab_size: int | None
    vector_size: int | None


def _parses_f32(token: bytes) -> bool:
    try:
        parse_f32(token)
    except ValueError:
        return False
    return True


def _tail_is_floats(segment: bytes, d: int) -> bool:
    """Does the segment right-tokenize into a word plus d float fields?"""
    if segment.endswith(b"\r"):
        segment = segment[:-1]
    if d > len(segment) // 2 + 1:
        return False
    parts = segment.rsplit(b" ", d)
    if len(parts) != d + 1:
        return False
    return all(_parses_f32(tok) for tok in parts[1:])


def _classify(data: bytes, whole_file: bool) -> SniffReport:
    if not data:
        raise UnknownFormatError("empty input", offset=0)
    if len(data) >= 8 and struct.unpack("<Q", data[:8])[0] == MAGIC:
        if len(data) < HEADER_SIZE:
            raise TruncatedError(
                "leader magic found but the file is shorter than its header",
                offset=len(data))
        header = _validate_header(data[:HEADER_SIZE])
        return SniffReport(FormatKind.LEADER, header.vocab_size,
                           header.vector_size)
    newline = data.find(b"\n")
    if newline < 0 and not whole_file:
        raise UnknownFormatError(
            f"no newline within the {PROBE_LIMIT}-byte probe window",
            offset=0)
    first = data[:newline] if newline >= 0 else data
    if first.endswith(b"\r"):
        first = first[:-1]
    m = _W2V_HEADER.match(first)
    if m is not None and newline >= 0 and int(m.group(2)) >= 1:
        n, d = int(m.group(1)), int(m.group(2))
        rest = data[newline + 1:]
        seg_end = rest.find(b"\n")
        if seg_end >= 0:
            segment, complete = rest[:seg_end], True
        else:
            # EOF inside the probe terminates the record line like a 0x0A
            segment, complete = rest, whole_file
        if complete and _tail_is_floats(segment, d):
            return SniffReport(FormatKind.W2V_TEXT, n, d)
        return SniffReport(FormatKind.W2V_BINARY, n, d)
    tokens = first.split(b" ")
    if len(tokens) >= 2 and all(_parses_f32(t) for t in tokens[1:]):
        return SniffReport(FormatKind.GLOVE_TEXT, None, len(tokens) - 1)
    raise UnknownFormatError(
        "first line is neither a leader header, a w2v header, nor a "
        "word-plus-floats line", offset=0)


def sniff(stream) -> SniffReport:
    """Identify the format from the leading bytes, then rewind.

    The stream must be seekable; after the call it is positioned at
    byte 0 whether or not detection succeeded.
    """
    data = stream.read(PROBE_LIMIT)
    try:
        return _classify(data, whole_file=len(data) < PROBE_LIMIT)
    finally:
        stream.seek(0)


def probe_report(stream, kind: FormatKind) -> SniffReport:
    """Best-effort header peek when the caller forces a format."""
    try:
        if kind is FormatKind.LEADER:
            header = read_leader_header(stream)
            return SniffReport(kind, header.vocab_size, header.vector_size)
        data = stream.read(PROBE_LIMIT)
        newline = data.find(b"\n")
        first = data[:newline] if newline >= 0 else data
        if kind in (FormatKind.W2V_TEXT, FormatKind.W2V_BINARY):
            n, d = parse_w2v_header_line(first)
            return SniffReport(kind, n, d)
        if first.endswith(b"\r"):
            first = first[:-1]
        d = first.count(b" ")
        return SniffReport(kind, None, d if d >= 1 else None)
    except VecError:
        return SniffReport(kind, None, None)
    finally:
        stream.seek(0)
