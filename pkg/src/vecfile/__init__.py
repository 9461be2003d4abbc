"""vecfile: read, write, sniff, convert, and benchmark word-vector files.

Supported formats: headerless glove text, w2v text (glove plus an "n d"
header line), w2v binary (text header, space-delimited words, raw LE
float32 vectors), and the fully binary length-prefixed leader format.
"""

from .bench import TimingSample, read_once, time_reads
from .leader import (LeaderHeader, MAGIC, expected_leader_size, read_leader,
                     read_leader_header, write_leader)
from .legacy import (expected_w2v_binary_size, read_glove_text,
                     read_w2v_binary, read_w2v_text, write_glove_text,
                     write_w2v_binary, write_w2v_text)
from .model import (DedupPolicy, DimensionMismatchError, DuplicateWordError,
                    Embeddings, FormatKind, HeaderMismatchError,
                    InvalidUtf8Error, IoError, MissingWordError, ReadOptions,
                    TruncatedError, UnknownFormatError, VecError,
                    BadMagicError, build_embeddings, lookup, similarity)
from .sniff import SniffReport, sniff
from .stats import (DEFAULT_ALPHA, StatSummary, WelchResult,
                    betainc_regularized, student_t_two_sided_p, summarize,
                    welch_t_test)
from .vecio import ConvertStats, convert, read_any, read_path

__version__ = "0.1.0"

__all__ = [
    "Embeddings", "FormatKind", "DedupPolicy", "ReadOptions",
    "build_embeddings", "lookup", "similarity",
    "VecError", "TruncatedError", "BadMagicError", "DimensionMismatchError",
    "DuplicateWordError", "InvalidUtf8Error", "UnknownFormatError",
    "HeaderMismatchError", "MissingWordError", "IoError",
    "MAGIC", "LeaderHeader", "read_leader", "read_leader_header",
    "write_leader", "expected_leader_size",
    "read_glove_text", "write_glove_text", "read_w2v_text", "write_w2v_text",
    "read_w2v_binary", "write_w2v_binary", "expected_w2v_binary_size",
    "SniffReport", "sniff",
    "ConvertStats", "convert", "read_any", "read_path",
    "TimingSample", "read_once", "time_reads",
    "StatSummary", "WelchResult", "summarize", "welch_t_test",
    "student_t_two_sided_p", "betainc_regularized", "DEFAULT_ALPHA",
    "__version__",
]
