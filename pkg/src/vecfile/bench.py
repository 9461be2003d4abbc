"""Read-time benchmarking.

Each rep is one full ingest (open through Embeddings constructed), timed
with a monotonic clock. Reps run strictly sequentially; concurrent reads
would contend for I/O and corrupt the numbers. The default is warm-cache
and labeled as such; dropping OS caches needs privileges this library
must not assume, so it is delegated to a user-supplied shell command run
before every rep.
"""

from __future__ import annotations

import gc
import subprocess
import time
from dataclasses import dataclass

from .model import FormatKind, IoError, ReadOptions
from .vecio import READERS_FULL


@dataclass(frozen=True)
class TimingSample:
    seconds: float


def read_once(path, format: FormatKind,
              opts: ReadOptions = ReadOptions()) -> float:
    """One timed full-file read; returns wall-clock seconds."""
    reader = READERS_FULL[format]
    start = time.perf_counter()
    try:
        with open(path, "rb") as stream:
            reader(stream, opts)
    except OSError as exc:
        raise IoError(f"cannot read {path}: {exc}", path=str(path)) from exc
    return time.perf_counter() - start


def _drop_caches(command: str) -> None:
    proc = subprocess.run(command, shell=True, capture_output=True)
    if proc.returncode != 0:
        raise IoError(
            f"cache-drop command failed with status {proc.returncode}: "
            f"{proc.stderr.decode(errors='replace').strip()}",
            path=command)


def time_reads(path, format: FormatKind, reps: int,
               drop_caches: str | None = None) -> list[TimingSample]:
    """Time ``reps`` sequential full reads of one file.

    When ``drop_caches`` is given it runs before every rep (typically a
    privileged command); otherwise all reps are warm-cache.
    """
    if reps < 1:
        raise ValueError("reps must be positive")
    samples = []
    for _ in range(reps):
        if drop_caches is not None:
            _drop_caches(drop_caches)
        gc.collect()  # keep collections of the previous rep's garbage
        # from landing inside the next timed region
        samples.append(TimingSample(read_once(path, format)))
    return samples
