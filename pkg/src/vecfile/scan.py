"""Structural file walks for `inspect`: headers, counts, and size checks
without materializing any vectors."""

from __future__ import annotations

import struct
from dataclasses import dataclass, field

from .bufio import ByteWindow, LineChunker
from .leader import HEADER_SIZE, _validate_header
from .legacy import parse_w2v_header_line
from .model import FormatKind, TruncatedError

_WORD_LEN = struct.Struct("<I")


@dataclass
class ScanInfo:
    kind: FormatKind
    declared_vocab: int | None = None
    records: int = 0
    dim: int | None = None
    head_words: list[str] = field(default_factory=list)
    expected_size: int | None = None
    expected_is_min: bool = False
    complete: bool = True
    problem: str | None = None


def _note(info: ScanInfo, problem: str) -> ScanInfo:
    info.complete = False
    info.problem = problem
    return info


def scan_leader(stream, head: int = 0) -> ScanInfo:
    win = ByteWindow(stream)
    header = _validate_header(win.take(HEADER_SIZE, "leader header"))
    n, d = header.vocab_size, header.vector_size
    info = ScanInfo(FormatKind.LEADER, declared_vocab=n, dim=d,
                    expected_size=HEADER_SIZE)
    if d < 1:
        return _note(info, "header declares zero-dimensional vectors")
    vec_bytes = 4 * d
    for i in range(n):
        try:
            word_len = _WORD_LEN.unpack(win.take(4, "word length"))[0]
        except TruncatedError as exc:
            info.expected_size += 4
            info.expected_is_min = True
            return _note(info, f"truncated inside record {i + 1}: {exc}")
        pending = 4 + word_len + vec_bytes
        try:
            raw = win.take(word_len, "word bytes")
            win.skip(vec_bytes, "vector bytes")
        except TruncatedError as exc:
            info.expected_size += pending
            # exact when the torn record is the last one declared
            info.expected_is_min = i < n - 1
            return _note(info, f"truncated inside record {i + 1}: {exc}")
        info.expected_size += pending
        info.records += 1
        if i < head:
            info.head_words.append(raw.decode("utf-8", "replace"))
    if not win.at_end():
        return _note(info, "trailing bytes after the declared records")
    return info


def scan_w2v_binary(stream, head: int = 0) -> ScanInfo:
    win = ByteWindow(stream)
    nl = win.find_byte(0x0A, "the header line")
    n, d = parse_w2v_header_line(win.buf[win.pos:nl])
    win.pos = nl + 1
    info = ScanInfo(FormatKind.W2V_BINARY, declared_vocab=n, dim=d,
                    expected_size=nl + 1)
    vec_bytes = 4 * d
    for i in range(n):
        raw = None
        try:
            while not win.at_end() and win.buf[win.pos] in (0x0A, 0x20):
                win.pos += 1
            if win.at_end():
                info.expected_is_min = True
                return _note(info, f"stream ended after {info.records} of "
                                   f"{n} records")
            sp = win.find_byte(0x20, f"the space after record {i + 1}'s word")
            raw = win.buf[win.pos:sp]
            win.pos = sp + 1
            win.skip(vec_bytes, "vector bytes")
        except TruncatedError as exc:
            if raw is not None:
                info.expected_size += len(raw) + 1 + vec_bytes
                info.expected_is_min = i < n - 1
            else:
                info.expected_is_min = True
            return _note(info, f"truncated inside record {i + 1}: {exc}")
        info.expected_size += len(raw) + 1 + vec_bytes
        info.records += 1
        if i < head:
            info.head_words.append(raw.decode("utf-8", "replace"))
    while not win.at_end() and win.buf[win.pos] in (0x0A, 0x20):
        win.pos += 1
    if not win.at_end():
        return _note(info, "trailing bytes after the declared records")
    return info


def scan_text(stream, kind: FormatKind, head: int = 0) -> ScanInfo:
    chunker = LineChunker(stream)
    info = ScanInfo(kind)
    d = None
    if kind is FormatKind.W2V_TEXT:
        header = chunker.read_line()
        if header is None:
            return _note(info, "missing header line")
        info.declared_vocab, d = parse_w2v_header_line(header)
        info.dim = d
    for lines in chunker.chunks():
        for raw in lines:
            line = raw[:-1] if raw.endswith(b"\r") else raw
            if d is None:
                d = line.count(b" ")
                info.dim = d
                if d < 1:
                    return _note(info, "cannot infer vector size from "
                                       "first line")
            parts = line.rsplit(b" ", d)
            if len(parts) != d + 1:
                return _note(info, f"line {info.records + 1} has "
                                   f"{len(parts) - 1} fields, expected {d}")
            info.records += 1
            if len(info.head_words) < head:
                info.head_words.append(parts[0].decode("utf-8", "replace"))
    if info.declared_vocab is not None and info.records != info.declared_vocab:
        return _note(info, f"header declared {info.declared_vocab} records, "
                           f"found {info.records}")
    return info


def scan_file(stream, kind: FormatKind, head: int = 0) -> ScanInfo:
    if kind is FormatKind.LEADER:
        return scan_leader(stream, head)
    if kind is FormatKind.W2V_BINARY:
        return scan_w2v_binary(stream, head)
    return scan_text(stream, kind, head)
