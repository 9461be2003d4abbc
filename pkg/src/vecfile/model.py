"""In-memory model for word vectors: vocabulary, matrix, lookup, similarity.

Words and float32 matrix rows stay aligned: word i maps to matrix row i.
Word identity is exact byte equality of the UTF-8 encoding; nothing is
normalized or case-folded, so anything we read can be written back
byte-for-byte.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Set
from dataclasses import dataclass
from enum import Enum

import numpy as np


class FormatKind(Enum):
    """The four supported on-disk formats."""

    GLOVE_TEXT = "glove"
    W2V_TEXT = "w2v-text"
    W2V_BINARY = "w2v-binary"
    LEADER = "leader"

    def __str__(self) -> str:
        return self.value


class DedupPolicy(Enum):
    """What to do when a source file repeats a word."""

    FIRST_WINS = "first"
    LAST_WINS = "last"
    ERROR = "error"

    def __str__(self) -> str:
        return self.value


class VecError(Exception):
    """Base error for vector file handling.

    Every instance carries position context (byte offset, line number,
    or path) so diagnostics can point at the offending spot.
    """

    kind = "Io"

    def __init__(self, message: str, *, offset: int | None = None,
                 line: int | None = None, path: str | None = None):
        super().__init__(message)
        self.message = message
        self.offset = offset
        self.line = line
        self.path = path

    def __str__(self) -> str:
        where = []
        if self.path is not None:
            where.append(self.path)
        if self.line is not None:
            where.append(f"line {self.line}")
        if self.offset is not None:
            where.append(f"byte {self.offset}")
        if where:
            return f"{self.message} ({', '.join(where)})"
        return self.message


class TruncatedError(VecError):
    kind = "Truncated"


class BadMagicError(VecError):
    kind = "BadMagic"


class DimensionMismatchError(VecError):
    kind = "DimensionMismatch"


class DuplicateWordError(VecError):
    kind = "DuplicateWord"


class InvalidUtf8Error(VecError):
    kind = "InvalidUtf8"


class UnknownFormatError(VecError):
    kind = "UnknownFormat"


class HeaderMismatchError(VecError):
    kind = "HeaderMismatch"


class MissingWordError(VecError):
    kind = "MissingWord"


class IoError(VecError):
    kind = "Io"


def _as_filter(filt) -> frozenset | None:
    if filt is None:
        return None
    if isinstance(filt, frozenset):
        return filt
    return frozenset(filt)


@dataclass(frozen=True)
class ReadOptions:
    """Options shared by every reader.

    ``filter`` is any iterable of words; only matching words are kept and
    an empty set yields an empty result. ``strict_utf8`` rejects word
    bytes that do not decode; when off, undecodable bytes are preserved
    via surrogate escapes so they still round-trip.
    """

    dedup: DedupPolicy = DedupPolicy.FIRST_WINS
    filter: Set[str] | None = None
    strict_utf8: bool = True

    def __post_init__(self):
        object.__setattr__(self, "filter", _as_filter(self.filter))


class Embeddings:
    """An ordered vocabulary aligned with an n-by-d float32 matrix.

    Immutable after construction (the matrix is frozen), so instances are
    safe to share across threads.
    """

    def __init__(self, words: list[str], matrix: np.ndarray):
        matrix = np.ascontiguousarray(matrix, dtype=np.float32)
        if matrix.ndim != 2:
            raise DimensionMismatchError(
                f"matrix must be 2-D, got shape {matrix.shape}", line=0)
        n, d = matrix.shape
        if d < 1:
            raise DimensionMismatchError(
                "zero-dimensional vectors are not supported", line=0)
        if len(words) != n:
            raise DimensionMismatchError(
                f"{len(words)} words but {n} matrix rows", line=0)
        index: dict[str, int] = {}
        for i, w in enumerate(words):
            if w in index:
                raise DuplicateWordError(f"duplicate word {w!r}", line=i + 1)
            index[w] = i
        matrix.setflags(write=False)
        self.words = words
        self.matrix = matrix
        self.index = index

    @property
    def n(self) -> int:
        return len(self.words)

    @property
    def dim(self) -> int:
        return self.matrix.shape[1]

    def __len__(self) -> int:
        return len(self.words)

    def __contains__(self, word: str) -> bool:
        return word in self.index

    def __eq__(self, other) -> bool:
        """Bit-exact equality: same words in the same order, same vector bits."""
        if not isinstance(other, Embeddings):
            return NotImplemented
        return (self.words == other.words
                and self.matrix.shape == other.matrix.shape
                and np.array_equal(self.matrix.view(np.uint32),
                                   other.matrix.view(np.uint32)))

    def __repr__(self) -> str:
        return f"Embeddings(n={self.n}, dim={self.dim})"


def build_embeddings(pairs: Iterable[tuple[str, Iterable[float]]],
                     dim: int,
                     policy: DedupPolicy = DedupPolicy.FIRST_WINS) -> Embeddings:
    """Assemble Embeddings from (word, vector) pairs, resolving duplicates.

    Surviving words keep first-occurrence order under both non-error
    policies; LAST_WINS replaces the stored vector in place. Raises
    DuplicateWordError under ERROR, DimensionMismatchError on a vector
    whose length is not ``dim``.
    """
    if dim < 1:
        raise DimensionMismatchError("dim must be positive", line=0)
    words: list[str] = []
    rows: list[np.ndarray] = []
    index: dict[str, int] = {}
    for rec, (word, vec) in enumerate(pairs, start=1):
        row = np.asarray(vec, dtype=np.float32)
        if row.shape != (dim,):
            raise DimensionMismatchError(
                f"vector for {word!r} has length {row.size}, expected {dim}",
                line=rec)
        at = index.get(word)
        if at is None:
            index[word] = len(words)
            words.append(word)
            rows.append(row)
        elif policy is DedupPolicy.ERROR:
            raise DuplicateWordError(f"duplicate word {word!r}", line=rec)
        elif policy is DedupPolicy.LAST_WINS:
            rows[at] = row
    if not words:
        raise DimensionMismatchError("refusing to build empty embeddings",
                                     line=0)
    return Embeddings(words, np.vstack(rows))


def lookup(emb: Embeddings, word: str) -> np.ndarray | None:
    """Return the stored vector for ``word``, or None when absent."""
    i = emb.index.get(word)
    if i is None:
        return None
    return emb.matrix[i]


def similarity(emb: Embeddings, w1: str, w2: str, mode: str = "cosine") -> float:
    """Dot or cosine similarity between two stored words.

    Accumulates in float64 over ascending element index, so the result is
    identical under argument swap. Cosine with a zero-norm vector is a
    domain error.
    """
    v1 = lookup(emb, w1)
    if v1 is None:
        raise MissingWordError(f"word {w1!r} not in vocabulary", path=w1)
    v2 = lookup(emb, w2)
    if v2 is None:
        raise MissingWordError(f"word {w2!r} not in vocabulary", path=w2)
    a = v1.astype(np.float64)
    b = v2.astype(np.float64)
    dot = float(np.dot(a, b))
    if mode == "dot":
        return dot
    if mode == "cosine":
        na = math.sqrt(float(np.dot(a, a)))
        nb = math.sqrt(float(np.dot(b, b)))
        if na == 0.0 or nb == 0.0:
            raise ValueError(
                f"cosine undefined for zero vector ({w1!r} or {w2!r})")
        return dot / (na * nb)
    raise ValueError(f"unknown similarity mode {mode!r}")


# Re-exported here so every module agrees on one source of truth.
FORMAT_NAMES = {k.value: k for k in FormatKind}

__all__ = [
    "FormatKind", "DedupPolicy", "ReadOptions", "Embeddings",
    "VecError", "TruncatedError", "BadMagicError", "DimensionMismatchError",
    "DuplicateWordError", "InvalidUtf8Error", "UnknownFormatError",
    "HeaderMismatchError", "MissingWordError", "IoError",
    "build_embeddings", "lookup", "similarity", "FORMAT_NAMES",
]
