"""Buffered forward-only reading helpers.

Readers never load whole files: binary codecs walk a sliding byte window
and text codecs consume newline-split line batches. Both keep absolute
positions so errors can report exact byte offsets / line numbers.
"""

from __future__ import annotations

from .model import TruncatedError

DEFAULT_CHUNK = 1 << 25  # 32 MiB keeps refills rare without hogging memory


class ByteWindow:
    """A sliding window over a binary stream.

    Codecs may read ``buf``/``pos`` directly in their hot loops and write
    ``pos`` back before calling ``refill``. ``base + pos`` is the absolute
    stream offset.
    """

    __slots__ = ("stream", "chunk", "buf", "pos", "base", "eof")

    def __init__(self, stream, chunk: int = DEFAULT_CHUNK):
        self.stream = stream
        self.chunk = chunk
        self.buf = b""
        self.pos = 0
        self.base = 0
        self.eof = False

    @property
    def abs_pos(self) -> int:
        return self.base + self.pos

    def available(self) -> int:
        return len(self.buf) - self.pos

    def refill(self, need: int = 1) -> bool:
        """Try to make at least ``need`` bytes available; False at EOF."""
        while len(self.buf) - self.pos < need:
            if self.eof:
                return False
            if self.pos:
                self.base += self.pos
                self.buf = self.buf[self.pos:]
                self.pos = 0
            data = self.stream.read(self.chunk)
            if not data:
                self.eof = True
            else:
                self.buf = self.buf + data if self.buf else data
        return True

    def take(self, n: int, what: str) -> bytes:
        """Consume exactly n bytes; a torn read reports where the data ends."""
        if not self.refill(n):
            raise TruncatedError(
                f"stream ended inside {what}: needed {n} bytes, "
                f"had {self.available()}", offset=self.base + len(self.buf))
        out = self.buf[self.pos:self.pos + n]
        self.pos += n
        return out

    def skip(self, n: int, what: str) -> None:
        """Advance past n bytes without copying them out."""
        if not self.refill(n):
            raise TruncatedError(
                f"stream ended inside {what}: needed {n} bytes, "
                f"had {self.available()}", offset=self.base + len(self.buf))
        self.pos += n

    def at_end(self) -> bool:
        return not self.refill(1)

    def find_byte(self, needle: int, what: str) -> int:
        """Index (relative to buf) of next ``needle`` at/after pos.

        Grows the window as needed; raises TruncatedError when the stream
        ends first. ``searched`` stays relative to pos so it survives the
        compaction a refill may perform.
        """
        searched = 0
        while True:
            i = self.buf.find(needle, self.pos + searched)
            if i >= 0:
                return i
            searched = len(self.buf) - self.pos
            if not self.refill(searched + 1):
                raise TruncatedError(
                    f"stream ended while scanning for {what}",
                    offset=self.base + len(self.buf))


class LineChunker:
    """Splits a stream on 0x0A, yielding batches of lines.

    A final piece with no trailing newline still counts as a line; the
    empty piece after a trailing newline does not.
    """

    def __init__(self, stream, chunk: int = DEFAULT_CHUNK):
        self.stream = stream
        self.chunk = chunk
        self._tail = b""
        self._eof = False

    def read_line(self) -> bytes | None:
        """One line (no newline byte), or None at end of input."""
        while b"\n" not in self._tail and not self._eof:
            data = self.stream.read(self.chunk)
            if not data:
                self._eof = True
                break
            self._tail += data
        if b"\n" in self._tail:
            line, self._tail = self._tail.split(b"\n", 1)
            return line
        if self._tail:
            line, self._tail = self._tail, b""
            return line
        return None

    def chunks(self):
        """Yield lists of complete lines until the stream is exhausted."""
        if self._tail:
            # leftover from read_line(): re-split whatever is buffered
            pieces = self._tail.split(b"\n")
            self._tail = pieces.pop()
            if pieces:
                yield pieces
        while not self._eof:
            data = self.stream.read(self.chunk)
            if not data:
                self._eof = True
                break
            pieces = (self._tail + data).split(b"\n") if self._tail \
                else data.split(b"\n")
            self._tail = pieces.pop()
            if pieces:
                yield pieces
        if self._tail:
            yield [self._tail]
            self._tail = b""
