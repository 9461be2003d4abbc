"""GloVe text, word2vec text, and word2vec binary codecs.

Parsing rules are hardened against the classic field bugs:

* Text lines split on byte 0x20 only, never on general whitespace, and
  are tokenized from the right: the last d fields are the vector, and
  everything before them is the word verbatim. Words containing other
  Unicode whitespace (U+00A0, U+2028, ...) therefore survive intact.
* All binary floats are little-endian on read and write; there is no
  byte-order guessing.
* The w2v-binary reader tolerates optional 0x0A/0x20 bytes before each
  word (both conventions exist in the wild); the writer emits none.
* Count disagreements with a header are errors, never silently clipped.
"""

from __future__ import annotations

import re

import numpy as np

from .bufio import ByteWindow, LineChunker
from .floatfmt import iter_token_chunks, parse_f32, parse_f32_tokens
from .model import (DimensionMismatchError, Embeddings, HeaderMismatchError,
                    InvalidUtf8Error, IoError, ReadOptions, TruncatedError)
from .records import ReadResult, RecordSink, concat_batches, gather_rows

_SPACE = 0x20
_NEWLINE = 0x0A
_FIELD_BATCH = 2_000_000  # tokens buffered per numpy conversion

_W2V_HEADER = re.compile(rb"\A(\d+)\x20(\d+)\Z")


def parse_w2v_header_line(line: bytes, lineno: int = 1) -> tuple[int, int]:
    """Two ASCII decimal integers separated by one 0x20."""
    if line.endswith(b"\r"):
        line = line[:-1]
    m = _W2V_HEADER.match(line)
    if m is None:
        raise HeaderMismatchError(
            f"malformed header line: {line[:64]!r}", line=lineno)
    n, d = int(m.group(1)), int(m.group(2))
    if d < 1:
        raise HeaderMismatchError("header declares zero-dimensional vectors",
                                  line=lineno)
    return n, d


def _bad_field(fields: list[bytes], field_lines: list[int], d: int,
               original: Exception):
    """Pin a batch conversion failure to its line and field."""
    for i, tok in enumerate(fields):
        try:
            parse_f32(tok)
        except ValueError:
            raise DimensionMismatchError(
                f"field {i % d + 1} is not a float32 decimal: {tok[:40]!r}",
                line=field_lines[i // d]) from None
    raise original


def _parse_text_body(chunker: LineChunker, opts: ReadOptions,
                     d: int | None, expected: int | None,
                     first_lineno: int) -> tuple[ReadResult | None, int, int]:
    """Shared line loop for the glove and w2v-text formats.

    Returns (result, d, data_line_count); result is None when no data
    lines existed so callers can apply their own empty-input rule.
    """
    sink = RecordSink(opts)
    offer = sink.offer
    errors = "strict" if opts.strict_utf8 else "surrogateescape"
    fields: list[bytes] = []
    field_lines: list[int] = []
    batches: list[np.ndarray] = []
    lineno = first_lineno
    count = 0

    def flush():
        if not fields:
            return
        try:
            batches.append(parse_f32_tokens(fields))
        except ValueError as exc:
            _bad_field(fields, field_lines, d, exc)
        fields.clear()
        field_lines.clear()

    for lines in chunker.chunks():
        for raw in lines:
            lineno += 1
            line = raw[:-1] if raw.endswith(b"\r") else raw
            if d is None:
                d = line.count(b" ")
                if d < 1:
                    raise DimensionMismatchError(
                        "cannot infer vector size from first line",
                        line=lineno)
            count += 1
            if expected is not None and count > expected:
                raise HeaderMismatchError(
                    f"header declared {expected} records, found more",
                    line=lineno)
            parts = line.rsplit(b" ", d)
            if len(parts) != d + 1:
                raise DimensionMismatchError(
                    f"line has {len(parts) - 1} trailing fields, expected {d}",
                    line=lineno)
            try:
                word = parts[0].decode("utf-8", errors)
            except UnicodeDecodeError as exc:
                raise InvalidUtf8Error(
                    f"word bytes are not valid UTF-8: {exc.reason}",
                    line=lineno) from None
            if offer(word):
                fields.extend(parts[1:])
                field_lines.append(lineno)
        if len(fields) >= _FIELD_BATCH:
            flush()
    flush()
    if count == 0:
        return None, d or 0, 0
    if expected is not None and count != expected:
        raise HeaderMismatchError(
            f"header declared {expected} records, found {count}", line=lineno)
    flat = concat_batches([b.reshape(-1) for b in batches], 0) \
        if batches else np.empty(0, dtype=np.float32)
    matrix = flat.reshape(-1, d)
    return sink.finish(matrix, d), d, count


def read_glove_text_full(stream, opts: ReadOptions = ReadOptions()) -> ReadResult:
    result, _, count = _parse_text_body(LineChunker(stream), opts,
                                        d=None, expected=None, first_lineno=0)
    if result is None or count == 0:
        raise TruncatedError("empty input", offset=0)
    return result


def read_glove_text(stream, opts: ReadOptions = ReadOptions()) -> Embeddings:
    return read_glove_text_full(stream, opts).embeddings


def read_w2v_text_full(stream, opts: ReadOptions = ReadOptions()) -> ReadResult:
    chunker = LineChunker(stream)
    header = chunker.read_line()
    if header is None:
        raise HeaderMismatchError("missing header line", line=1)
    n, d = parse_w2v_header_line(header)
    result, _, count = _parse_text_body(chunker, opts, d=d, expected=n,
                                        first_lineno=1)
    if result is None:
        if n != 0:
            raise HeaderMismatchError(
                f"header declared {n} records, found 0", line=1)
        # header-only file with a zero count: an empty but valid embedding
        return RecordSink(opts).finish(np.empty((0, d), np.float32), d)
    return result


def read_w2v_text(stream, opts: ReadOptions = ReadOptions()) -> Embeddings:
    return read_w2v_text_full(stream, opts).embeddings


def _skip_separators(win: ByteWindow) -> bool:
    """Consume 0x0A/0x20 runs; False when the stream ends first."""
    while True:
        if not win.refill(1):
            return False
        buf, limit = win.buf, len(win.buf)
        pos = win.pos
        while pos < limit:
            c = buf[pos]
            if c == _NEWLINE or c == _SPACE:
                pos += 1
            else:
                win.pos = pos
                return True
        win.pos = pos


def read_w2v_binary_full(stream, opts: ReadOptions = ReadOptions()) -> ReadResult:
    win = ByteWindow(stream)
    nl = win.find_byte(_NEWLINE, "the header line")
    n, d = parse_w2v_header_line(win.buf[win.pos:nl])
    win.pos = nl + 1
    vec_bytes = 4 * d
    sink = RecordSink(opts)
    offer = sink.offer
    errors = "strict" if opts.strict_utf8 else "surrogateescape"
    batches: list[np.ndarray] = []
    rec = 0
    while rec < n:
        buf = win.buf
        limit = len(buf)
        pos = win.pos
        offs: list[int] = []
        push = offs.append
        while rec < n:
            while pos < limit:  # optional separators before the word
                c = buf[pos]
                if c == _NEWLINE or c == _SPACE:
                    pos += 1
                else:
                    break
            if pos >= limit:
                break
            sp = buf.find(_SPACE, pos)
            if sp < 0:
                break
            end = sp + 1 + vec_bytes
            if end > limit:
                break
            try:
                word = buf[pos:sp].decode("utf-8", errors)
            except UnicodeDecodeError as exc:
                raise InvalidUtf8Error(
                    f"word bytes are not valid UTF-8: {exc.reason}",
                    offset=win.base + pos) from None
            rec += 1
            if offer(word):
                push(sp + 1)
            pos = end
        win.pos = pos
        if offs:
            batches.append(gather_rows(buf, offs, d))
        if rec < n:
            # a record straddles the window edge (or the stream is short)
            if not _skip_separators(win):
                raise HeaderMismatchError(
                    f"header declared {n} records, stream ended after {rec}",
                    offset=win.abs_pos)
            sp = win.find_byte(_SPACE, f"the space after record {rec + 1}'s word")
            raw = win.buf[win.pos:sp]
            try:
                word = raw.decode("utf-8", errors)
            except UnicodeDecodeError as exc:
                raise InvalidUtf8Error(
                    f"word bytes are not valid UTF-8: {exc.reason}",
                    offset=win.abs_pos) from None
            win.pos = sp + 1
            vec = win.take(vec_bytes, f"record {rec + 1}'s vector")
            rec += 1
            if offer(word):
                batches.append(
                    np.frombuffer(vec, dtype="<f4").reshape(1, d))
    _skip_separators(win)
    if not win.at_end():
        raise HeaderMismatchError(
            f"trailing bytes after the declared {n} records",
            offset=win.abs_pos)
    return sink.finish(concat_batches(batches, d), d)


def read_w2v_binary(stream, opts: ReadOptions = ReadOptions()) -> Embeddings:
    return read_w2v_binary_full(stream, opts).embeddings


def _encode_text_safe(words: list[str], allow_cr: bool) -> list[bytes]:
    banned = b" \n" if allow_cr else b" \n\r"
    out = []
    for i, word in enumerate(words):
        raw = word.encode("utf-8", "surrogateescape")
        if not raw:
            raise ValueError(f"word at index {i} is empty and cannot be "
                             "written to this format")
        if any(b in raw for b in banned):
            raise ValueError(
                f"word {word!r} at index {i} contains a delimiter byte "
                f"(0x20/0x0A{'' if allow_cr else '/0x0D'}) and cannot be "
                "written to a text format")
        out.append(raw)
    return out


def _write_text(emb: Embeddings, stream, with_header: bool) -> int:
    if emb.n == 0:
        raise ValueError("refusing to write empty embeddings")
    raws = _encode_text_safe(emb.words, allow_cr=False)
    total = 0
    try:
        if with_header:
            header = f"{emb.n} {emb.dim}\n".encode("ascii")
            stream.write(header)
            total += len(header)
        for lo, toks in iter_token_chunks(emb.matrix, 0, emb.n):
            rows = toks.tolist()
            lines = []
            for j, row in enumerate(rows):
                row.insert(0, raws[lo + j])
                lines.append(b" ".join(row))
            blob = b"\n".join(lines) + b"\n"
            stream.write(blob)
            total += len(blob)
    except OSError as exc:
        raise IoError(f"write failed: {exc}") from exc
    return total


def write_glove_text(emb: Embeddings, stream) -> int:
    """One 0x0A-terminated line per word; floats in shortest-round-trip form."""
    return _write_text(emb, stream, with_header=False)


def write_w2v_text(emb: Embeddings, stream) -> int:
    """Glove body preceded by the ASCII "n d" header line."""
    return _write_text(emb, stream, with_header=True)


_FLUSH_RECORDS = 4096


def write_w2v_binary(emb: Embeddings, stream) -> int:
    """Header line, then per record: word bytes, one 0x20, d LE float32s."""
    if emb.n == 0:
        raise ValueError("refusing to write empty embeddings")
    raws = _encode_text_safe(emb.words, allow_cr=True)
    matrix = emb.matrix.astype("<f4", copy=False)
    vec_bytes = 4 * emb.dim
    header = f"{emb.n} {emb.dim}\n".encode("ascii")
    total = len(header)
    pieces: list[bytes] = [header]
    try:
        for i, raw in enumerate(raws):
            pieces.append(raw)
            pieces.append(b" ")
            pieces.append(matrix[i].tobytes())
            total += len(raw) + 1 + vec_bytes
            if len(pieces) >= 3 * _FLUSH_RECORDS:
                stream.write(b"".join(pieces))
                pieces.clear()
        if pieces:
            stream.write(b"".join(pieces))
    except OSError as exc:
        raise IoError(f"write failed: {exc}") from exc
    return total


def expected_w2v_binary_size(word_byte_lengths, d: int) -> int:
    """Size arithmetic: header length + sum(len + 1 + 4d)."""
    lens = list(word_byte_lengths)
    header = len(f"{len(lens)} {d}\n")
    return header + sum(L + 1 + 4 * d for L in lens)
