"""Public read/convert surface tying sniffing, codecs, and policies together."""

from __future__ import annotations

import time
from dataclasses import dataclass

from . import leader, legacy
from .model import Embeddings, FormatKind, ReadOptions
from .records import ReadResult
from .sniff import SniffReport, probe_report, sniff

READERS_FULL = {
    FormatKind.GLOVE_TEXT: legacy.read_glove_text_full,
    FormatKind.W2V_TEXT: legacy.read_w2v_text_full,
    FormatKind.W2V_BINARY: legacy.read_w2v_binary_full,
    FormatKind.LEADER: leader.read_leader_full,
}

WRITERS = {
    FormatKind.GLOVE_TEXT: legacy.write_glove_text,
    FormatKind.W2V_TEXT: legacy.write_w2v_text,
    FormatKind.W2V_BINARY: legacy.write_w2v_binary,
    FormatKind.LEADER: leader.write_leader,
}


@dataclass
class ConvertStats:
    records_read: int
    records_written: int
    duplicates_resolved: int
    filtered_out: int
    bytes_written: int
    elapsed: float


def _read_any_full(stream, opts: ReadOptions,
                   format_override: FormatKind | None
                   ) -> tuple[ReadResult, SniffReport]:
    if format_override is None:
        report = sniff(stream)
    else:
        report = probe_report(stream, format_override)
    result = READERS_FULL[report.kind](stream, opts)
    return result, report


def read_any(stream, opts: ReadOptions = ReadOptions(),
             format_override: FormatKind | None = None
             ) -> tuple[Embeddings, SniffReport, list[str]]:
    """Sniff (or trust the override), then read with the matching codec.

    Returns the embeddings, the sniff report, and the sorted list of
    filter words that were not found in the file.
    """
    result, report = _read_any_full(stream, opts, format_override)
    return result.embeddings, report, result.missing


def read_path(path, opts: ReadOptions = ReadOptions(),
              format_override: FormatKind | None = None
              ) -> tuple[Embeddings, SniffReport, list[str]]:
    with open(path, "rb") as stream:
        return read_any(stream, opts, format_override)


def convert(in_stream, out_stream, to: FormatKind,
            opts: ReadOptions = ReadOptions(),
            format_override: FormatKind | None = None) -> ConvertStats:
    """Read from one format, write to another, preserving vector bits.

    Writing to a text format enforces that format's word constraints; the
    error names the offending word and its index.
    """
    start = time.perf_counter()
    result, _ = _read_any_full(in_stream, opts, format_override)
    bytes_written = WRITERS[to](result.embeddings, out_stream)
    return ConvertStats(
        records_read=result.records_read,
        records_written=result.embeddings.n,
        duplicates_resolved=result.duplicates_resolved,
        filtered_out=result.filtered_out,
        bytes_written=bytes_written,
        elapsed=time.perf_counter() - start,
    )
