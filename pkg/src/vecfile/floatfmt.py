"""Shortest-round-trip float32 text rendering and decimal parsing.

Text formats stay lossless only if every float is printed as a string
that parses back to the identical binary32 value. Rendering picks the
shorter of the unique positional and scientific forms; parsing goes
through float64 first, which cannot double-round for strings this short.
"""

from __future__ import annotations

import numpy as np

_F32 = np.float32
_U32 = np.uint32


def format_f32(value) -> str:
    """Shortest decimal string that parses back to the same binary32."""
    f = _F32(value)
    if np.isnan(f):
        # Payload bits are not representable in text; only the sign survives.
        return "-nan" if np.signbit(f) else "nan"
    if np.isinf(f):
        return "-inf" if f < 0 else "inf"
    pos = np.format_float_positional(f, unique=True, trim="-")
    sci = np.format_float_scientific(f, unique=True, trim="-")
    return pos if len(pos) <= len(sci) else sci


def parse_f32(token: bytes) -> np.float32:
    """Parse one decimal token (case-insensitive nan/inf included)."""
    try:
        return np.array([token], dtype=_F32)[0]
    except ValueError:
        raise ValueError(f"not a decimal float: {token!r}") from None


def parse_f32_tokens(tokens: list[bytes]) -> np.ndarray:
    """Parse many tokens at once; raises ValueError naming the bad token."""
    return np.array(tokens, dtype=_F32)


def iter_token_chunks(matrix: np.ndarray, start: int, stop: int):
    """Render matrix rows [start, stop) to byte tokens, chunk by chunk.

    Yields one object array of shape (rows, d) per chunk. Equal bit
    patterns are rendered once and reused, keyed on the uint32 view so
    that -0.0 and NaN variants keep their sign through the text form.
    """
    cache: dict[int, bytes] = {}
    rows_per_chunk = max(1, (1 << 22) // max(1, matrix.shape[1]))
    for lo in range(start, stop, rows_per_chunk):
        chunk = np.ascontiguousarray(matrix[lo:min(lo + rows_per_chunk, stop)])
        bits = chunk.view(_U32).ravel()
        uniq, inv = np.unique(bits, return_inverse=True)
        rendered = np.empty(len(uniq), dtype=object)
        floats = uniq.view(_F32)
        for i, u in enumerate(uniq.tolist()):
            tok = cache.get(u)
            if tok is None:
                tok = format_f32(floats[i]).encode("ascii")
                cache[u] = tok
            rendered[i] = tok
        yield lo, rendered[inv].reshape(chunk.shape)
