"""The vecfile command-line tool.

Machine-readable results go to stdout, diagnostics to stderr, and every
error kind maps to a fixed exit code so scripts can branch on failures.
``--json`` swaps the plain output for one JSON object with the same data.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from enum import IntEnum

import numpy as np

from .bench import time_reads
from .bufio import LineChunker
from .floatfmt import format_f32
from .model import (DedupPolicy, DuplicateWordError, FormatKind,
                    MissingWordError, ReadOptions, UnknownFormatError,
                    VecError, lookup)
from .scan import scan_file
from .sniff import sniff
from .stats import DEFAULT_ALPHA, summarize, welch_t_test
from .vecio import convert, read_any
from . import report


class ExitCode(IntEnum):
    OK = 0
    FAILURE = 1          # I/O or parse error
    UNKNOWN_FORMAT = 2
    DUPLICATE_WORD = 3
    MISSING_WORD = 4


def classify_error(exc: BaseException) -> ExitCode:
    if isinstance(exc, UnknownFormatError):
        return ExitCode.UNKNOWN_FORMAT
    if isinstance(exc, DuplicateWordError):
        return ExitCode.DUPLICATE_WORD
    if isinstance(exc, MissingWordError):
        return ExitCode.MISSING_WORD
    return ExitCode.FAILURE


def _format_arg(value: str) -> FormatKind | None:
    if value == "auto":
        return None
    return FormatKind(value)


def _emit(args, payload: dict, plain: str) -> None:
    if args.json:
        print(json.dumps(payload))
    else:
        print(plain)


def _count_lines(path) -> int:
    with open(path, "rb") as stream:
        return sum(len(lines) for lines in LineChunker(stream).chunks())


def cmd_sniff(args) -> int:
    with open(args.file, "rb") as stream:
        rep = sniff(stream)
    vocab = rep.vocab_size
    if vocab is None and args.count:
        vocab = _count_lines(args.file)
    vocab_text = "unknown" if vocab is None else str(vocab)
    dim_text = "unknown" if rep.vector_size is None else str(rep.vector_size)
    _emit(args,
          {"format": rep.kind.value, "vocab": vocab, "dim": rep.vector_size},
          f"format={rep.kind.value} vocab={vocab_text} dim={dim_text}")
    return ExitCode.OK


def _read_filter_vocab(path) -> frozenset[str]:
    # one word per 0x0A-delimited line, byte-exact (no stripping)
    with open(path, "rb") as stream:
        data = stream.read()
    pieces = data.split(b"\n")
    if pieces and pieces[-1] == b"":
        pieces.pop()
    return frozenset(p.decode("utf-8", "surrogateescape") for p in pieces)


def cmd_convert(args) -> int:
    opts = ReadOptions(
        dedup=DedupPolicy(args.dedup),
        filter=_read_filter_vocab(args.filter_vocab)
        if args.filter_vocab else None,
    )
    out_opened = False
    try:
        with open(args.infile, "rb") as src:
            with open(args.outfile, "wb") as dst:
                out_opened = True
                stats = convert(src, dst, FormatKind(args.to), opts,
                                format_override=_format_arg(args.from_))
    except BaseException:
        if out_opened:
            try:
                os.remove(args.outfile)
            except OSError:
                pass
        raise
    payload = {
        "records_read": stats.records_read,
        "records_written": stats.records_written,
        "duplicates_resolved": stats.duplicates_resolved,
        "filtered_out": stats.filtered_out,
        "bytes_written": stats.bytes_written,
        "elapsed": stats.elapsed,
    }
    plain = " ".join(f"{k}={v}" for k, v in payload.items()
                     if k != "elapsed") + f" elapsed={stats.elapsed:.3f}s"
    _emit(args, payload, plain)
    return ExitCode.OK


def cmd_inspect(args) -> int:
    size = os.stat(args.file).st_size
    override = _format_arg(args.from_)
    if override is None:
        with open(args.file, "rb") as stream:
            kind = sniff(stream).kind
    else:
        kind = override
    with open(args.file, "rb") as stream:
        info = scan_file(stream, kind, head=args.head)
    if info.expected_size is None:
        match = info.complete
        expected_text = "n/a"
    elif info.expected_is_min:
        match = False
        expected_text = f">={info.expected_size}"
    else:
        match = info.complete and info.expected_size == size
        expected_text = str(info.expected_size)
    verdict = "match" if match else "mismatch"
    vocab = info.declared_vocab if info.declared_vocab is not None \
        else info.records
    payload = {
        "format": kind.value,
        "vocab": vocab,
        "records": info.records,
        "dim": info.dim,
        "file_size": size,
        "expected_size": info.expected_size,
        "expected_is_min": info.expected_is_min,
        "verdict": verdict,
        "problem": info.problem,
        "head": info.head_words,
    }
    lines = [f"format={kind.value}", f"vocab={vocab}", f"dim={info.dim}",
             f"size={size}", f"expected={expected_text}",
             f"verdict={verdict}"]
    if info.problem:
        print(f"vecfile: {info.problem}", file=sys.stderr)
    if info.head_words:
        lines.append("words: " + " ".join(info.head_words))
    _emit(args, payload, "\n".join(lines))
    return ExitCode.OK


def _read_file(path, format_override):
    with open(path, "rb") as stream:
        emb, rep, missing = read_any(stream,
                                     format_override=format_override)
    return emb, rep


def cmd_vector(args) -> int:
    emb, _ = _read_file(args.file, _format_arg(args.from_))
    rows = []
    for word in args.words:
        vec = lookup(emb, word)
        if vec is None:
            raise MissingWordError(f"word {word!r} not in vocabulary",
                                   path=args.file)
        rows.append((word, vec))
    payload = {"vectors": {w: [float(x) for x in v] for w, v in rows}}
    plain = "\n".join(
        w + " " + " ".join(format_f32(x) for x in v) for w, v in rows)
    _emit(args, payload, plain)
    return ExitCode.OK


def _cosine_against_all(emb, word: str) -> np.ndarray:
    """Cosine of ``word`` against every row; zero-norm rows yield NaN."""
    q = lookup(emb, word)
    if q is None:
        raise MissingWordError(f"word {word!r} not in vocabulary", path=word)
    q = q.astype(np.float64)
    qn = np.sqrt(q @ q)
    if qn == 0.0:
        raise ValueError(f"cosine undefined for zero vector {word!r}")
    out = np.empty(emb.n, dtype=np.float64)
    chunk = max(1, (1 << 22) // max(1, emb.dim))
    for lo in range(0, emb.n, chunk):
        block = emb.matrix[lo:lo + chunk].astype(np.float64)
        dots = block @ q
        norms = np.sqrt(np.einsum("ij,ij->i", block, block))
        with np.errstate(invalid="ignore", divide="ignore"):
            out[lo:lo + len(block)] = dots / (norms * qn)
        out[lo:lo + len(block)][norms == 0.0] = np.nan
    return out


def cmd_similar(args) -> int:
    emb, _ = _read_file(args.file, _format_arg(args.from_))
    from .model import similarity
    if args.top_k is not None:
        if len(args.words) != 1:
            raise ValueError("--top-k takes exactly one query word")
        word = args.words[0]
        cos = _cosine_against_all(emb, word)
        cos[emb.index[word]] = -np.inf  # exclude the query itself
        cos[np.isnan(cos)] = -np.inf   # zero-norm rows cannot be ranked
        k = min(args.top_k, emb.n - 1)
        order = np.argsort(-cos, kind="stable")[:k]
        pairs = [(emb.words[i], float(cos[i])) for i in order
                 if cos[i] != -np.inf]
        payload = {"query": word,
                   "neighbors": [{"word": w, "cosine": c} for w, c in pairs]}
        plain = "\n".join(f"{c!r} {w}" for w, c in pairs)
        _emit(args, payload, plain)
        return ExitCode.OK
    if len(args.words) != 2:
        raise ValueError("similar needs two words, or --top-k and one word")
    value = similarity(emb, args.words[0], args.words[1], mode="cosine")
    _emit(args, {"w1": args.words[0], "w2": args.words[1],
                 "cosine": value}, repr(value))
    return ExitCode.OK


def cmd_bench(args) -> int:
    alpha = DEFAULT_ALPHA
    rows = []
    all_samples = []
    for path in args.files:
        with open(path, "rb") as stream:
            rep = sniff(stream)
        samples = time_reads(path, rep.kind, args.reps,
                             drop_caches=args.drop_caches)
        summary = summarize(samples)
        rows.append({
            "path": str(path),
            "format": rep.kind.value,
            "vocab": rep.vocab_size,
            "dim": rep.vector_size,
            "reps": summary.n,
            "mean_seconds": summary.mean,
            "std_seconds": summary.std,
            "fastest": False,
            "significant": False,
            "p_vs_fastest": None,
        })
        all_samples.append([s.seconds for s in samples])
    comparisons = []
    if args.compare and len(rows) >= 2:
        fastest = min(range(len(rows)), key=lambda i: rows[i]["mean_seconds"])
        rows[fastest]["fastest"] = True
        all_significant = True
        for i, row in enumerate(rows):
            if i == fastest:
                continue
            result = welch_t_test(all_samples[fastest], all_samples[i],
                                  alpha=alpha)
            row["p_vs_fastest"] = result.p
            comparisons.append({
                "a": rows[fastest]["path"], "b": row["path"],
                "t": result.t, "df": result.df, "p": result.p,
                "significant": result.significant,
            })
            all_significant = all_significant and result.significant
        rows[fastest]["significant"] = all_significant
    cache = "dropped" if args.drop_caches else "warm"
    if args.csv:
        report.write_bench_csv(args.csv, rows)
    if args.plot:
        report.render_bench_figure(args.plot, rows, alpha,
                                   warm_cache=cache == "warm")
    if args.json:
        print(json.dumps({"cache": cache, "reps": args.reps, "alpha": alpha,
                          "results": rows, "comparisons": comparisons}))
        return ExitCode.OK
    print(f"cache={cache} reps={args.reps} alpha={alpha}")
    header = f"{'file':<40} {'format':<11} {'mean(s)':>12} {'std(s)':>12}"
    if args.compare:
        header += f" {'p-vs-fastest':>14} flag"
    print(header)
    for row in rows:
        line = (f"{row['path']:<40} {row['format']:<11} "
                f"{row['mean_seconds']:>12.4f} {row['std_seconds']:>12.4f}")
        if args.compare:
            p = row["p_vs_fastest"]
            p_text = "-" if p is None else f"{p:.4g}"
            flag = "*" if row["fastest"] and row["significant"] else ""
            line += f" {p_text:>14} {flag}"
        print(line)
    return ExitCode.OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="vecfile",
        description="Sniff, convert, inspect, and benchmark word-vector "
                    "files (glove, w2v-text, w2v-binary, leader).")
    sub = parser.add_subparsers(dest="command", required=True)
    formats = [k.value for k in FormatKind]

    def add_json(p):
        p.add_argument("--json", action="store_true",
                       help="emit one JSON object instead of plain text")

    def add_from(p):
        p.add_argument("--from", dest="from_", default="auto",
                       choices=["auto"] + formats,
                       help="input format (default: sniffed)")

    p = sub.add_parser("sniff", help="detect a file's format")
    p.add_argument("file")
    p.add_argument("--count", action="store_true",
                   help="count lines to report glove vocab size")
    add_json(p)
    p.set_defaults(func=cmd_sniff)

    p = sub.add_parser("convert", help="convert between formats")
    p.add_argument("infile")
    p.add_argument("outfile")
    p.add_argument("--to", required=True, choices=formats)
    add_from(p)
    p.add_argument("--dedup", default="first",
                   choices=[d.value for d in DedupPolicy])
    p.add_argument("--filter-vocab", metavar="FILE",
                   help="keep only words listed in FILE "
                        "(one word per 0x0A-terminated line)")
    add_json(p)
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("inspect",
                       help="show header info and verify the size law")
    p.add_argument("file")
    p.add_argument("--head", type=int, default=0, metavar="K",
                   help="also print the first K words")
    add_from(p)
    add_json(p)
    p.set_defaults(func=cmd_inspect)

    p = sub.add_parser("vector", help="print stored vectors")
    p.add_argument("file")
    p.add_argument("words", nargs="+", metavar="WORD")
    add_from(p)
    add_json(p)
    p.set_defaults(func=cmd_vector)

    p = sub.add_parser("similar",
                       help="cosine similarity of a word pair, or --top-k")
    p.add_argument("file")
    p.add_argument("words", nargs="+", metavar="WORD")
    p.add_argument("--top-k", type=int, default=None, metavar="K",
                   help="print the K nearest words to one query word")
    add_from(p)
    add_json(p)
    p.set_defaults(func=cmd_similar)

    p = sub.add_parser("bench", help="time full-file reads")
    p.add_argument("files", nargs="+", metavar="FILE")
    p.add_argument("--reps", type=int, default=5)
    p.add_argument("--drop-caches", metavar="CMD",
                   help="shell command run before every rep "
                        "(typically privileged)")
    p.add_argument("--compare", action="store_true",
                   help="Welch-test every file against the fastest")
    p.add_argument("--csv", metavar="PATH", help="write rows as CSV")
    p.add_argument("--plot", metavar="PATH",
                   help="render a bar chart of the results")
    add_json(p)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return int(args.func(args))
    except (VecError, OSError, ValueError) as exc:
        print(f"vecfile: error: {exc}", file=sys.stderr)
        return int(classify_error(exc))


if __name__ == "__main__":
    sys.exit(main())
