"""Shared streaming-read state: dedup + filter bookkeeping and final
Embeddings assembly.

Readers account for every record exactly once. Dedup is applied before
filter accounting, so a repeat of a filtered-out word counts as a
duplicate, not as filtered. The binary codecs inline the fast path of
``offer`` in their record loops for speed (they operate on this sink's
own lists and write the counters back); that inline logic must stay in
lockstep with ``offer``, which the text codecs call directly and the
cross-format dedup tests pin.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import (DedupPolicy, DuplicateWordError, Embeddings, ReadOptions)

FILTERED = -1
UNSEEN = -2


@dataclass
class ReadResult:
    embeddings: Embeddings
    missing: list[str]
    records_read: int
    duplicates_resolved: int
    filtered_out: int


class RecordSink:
    """Order-preserving accumulator for one streaming read.

    ``row_src`` exists only under LAST_WINS: extracted vector slots and
    vocabulary rows stay identical until a replacement occurs, so the
    other policies never pay for the indirection.
    """

    __slots__ = ("policy", "filt", "words", "index", "row_src", "slots",
                 "records_read", "duplicates", "filtered", "remapped")

    def __init__(self, opts: ReadOptions):
        self.policy = opts.dedup
        self.filt = opts.filter
        self.words: list[str] = []
        self.index: dict[str, int] = {}
        self.row_src: list[int] | None = \
            [] if opts.dedup is DedupPolicy.LAST_WINS else None
        self.slots = 0
        self.records_read = 0
        self.duplicates = 0
        self.filtered = 0
        self.remapped = False

    def offer(self, word: str) -> bool:
        """Account for one record; True when its vector must be kept."""
        self.records_read += 1
        at = self.index.get(word, UNSEEN)
        if at == UNSEEN:
            if self.filt is not None and word not in self.filt:
                self.index[word] = FILTERED
                self.filtered += 1
                return False
            self.index[word] = len(self.words)
            self.words.append(word)
            if self.row_src is not None:
                self.row_src.append(self.slots)
            self.slots += 1
            return True
        self.duplicates += 1
        if self.policy is DedupPolicy.ERROR:
            raise DuplicateWordError(f"duplicate word {word!r}",
                                     line=self.records_read)
        if self.policy is DedupPolicy.LAST_WINS and at != FILTERED:
            self.row_src[at] = self.slots
            self.slots += 1
            self.remapped = True
            return True
        return False

    def finish(self, extracted: np.ndarray, dim: int) -> ReadResult:
        """Resolve vector slots into the final matrix and build the result."""
        if self.remapped:
            matrix = extracted[np.asarray(self.row_src, dtype=np.intp)]
        else:
            matrix = extracted
        if matrix.shape[0] != len(self.words):
            raise AssertionError("row bookkeeping out of sync")
        if self.filt is not None:
            index = {w: i for i, w in enumerate(self.words)}
            missing = sorted(w for w in self.filt if w not in self.index)
        else:
            index = self.index
            missing = []
        emb = Embeddings.__new__(Embeddings)
        matrix = np.ascontiguousarray(matrix, dtype=np.float32)
        matrix.setflags(write=False)
        emb.words = self.words
        emb.matrix = matrix
        emb.index = index
        return ReadResult(emb, missing, self.records_read,
                          self.duplicates, self.filtered)


def rows_from_parts(parts: list[bytes], d: int) -> np.ndarray:
    """One n-by-d float32 array from per-record little-endian byte runs."""
    blob = parts[0] if len(parts) == 1 else b"".join(parts)
    return np.frombuffer(blob, dtype="<f4").reshape(-1, d)


def concat_batches(batches: list[np.ndarray], d: int) -> np.ndarray:
    if not batches:
        return np.empty((0, d), dtype=np.float32)
    if len(batches) == 1:
        return batches[0]
    return np.concatenate(batches, axis=0)
