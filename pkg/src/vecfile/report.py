"""Benchmark report output: delimited rows and a rendered figure.

The same row dicts feed the stdout table, the CSV file, and the bar
chart, so every surface agrees on the numbers.
"""

from __future__ import annotations

import csv

CSV_COLUMNS = ["path", "format", "vocab", "dim", "reps",
               "mean_seconds", "std_seconds", "fastest", "significant"]


def write_bench_csv(path, rows: list[dict]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS)
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in CSV_COLUMNS})


def render_bench_figure(path, rows: list[dict], alpha: float,
                        warm_cache: bool) -> None:
    """Horizontal bar chart of mean read time with std error bars."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    labels = [f"{r['path']}\n({r['format']})" for r in rows]
    means = [r["mean_seconds"] for r in rows]
    stds = [r["std_seconds"] for r in rows]
    colors = ["#2a7f4f" if r.get("fastest") and r.get("significant")
              else "#4878a8" for r in rows]

    height = max(2.0, 0.7 * len(rows) + 1.2)
    fig, ax = plt.subplots(figsize=(8, height))
    y = range(len(rows))
    ax.barh(y, means, xerr=stds, color=colors, capsize=4)
    ax.set_yticks(list(y))
    ax.set_yticklabels(labels, fontsize=8)
    ax.invert_yaxis()
    ax.set_xlabel("mean read time (s)")
    cache = "warm cache" if warm_cache else "caches dropped per rep"
    ax.set_title(f"full-file read time, {cache}; "
                 f"green = significantly fastest (alpha={alpha})")
    for yi, (m, s) in enumerate(zip(means, stds)):
        ax.annotate(f"{m:.4g}±{s:.2g}", (m, yi), xytext=(4, 0),
                    textcoords="offset points", va="center", fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
