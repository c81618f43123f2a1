"""Delimited output and figures for self-test telemetry.

Writes one CSV row per corpus case plus matplotlib renderings of the
size-containment behaviour: observed post-reduction element sizes
against the per-run bound term, and the distribution of the observed
ratio (whose ceiling is the build's regression tripwire).
"""

from __future__ import annotations

import csv
from pathlib import Path

CSV_COLUMNS = [
    "field", "n", "index", "max_elt_size", "max_ideal_size",
    "bound_term", "ratio", "normalizations", "reductions", "seconds",
]


def write_case_csv(records, path) -> Path:
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow([
                r.field, r.n, r.index,
                f"{r.max_elt_size:.6f}", f"{r.max_ideal_size:.6f}",
                f"{r.bound_term:.6f}", f"{r.ratio:.6f}",
                r.normalizations, r.reductions, f"{r.seconds:.6f}",
            ])
    return path


def render_figures(records, out_dir, ceiling=64.0):
    """Render the telemetry figures; returns the written file paths."""
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    out_dir = Path(out_dir)
    fields = sorted({r.field for r in records})
    colors = plt.cm.tab10.colors

    fig, ax = plt.subplots(figsize=(7, 5))
    for k, name in enumerate(fields):
        xs = [r.bound_term for r in records if r.field == name]
        ys = [r.max_elt_size for r in records if r.field == name]
        ax.scatter(xs, ys, s=18, label=name, color=colors[k % len(colors)],
                   alpha=0.75)
    lim = max([r.bound_term for r in records] + [1.0])
    ax.plot([0, lim], [0, ceiling * lim], "k--", linewidth=1,
            label=f"ceiling ({ceiling:g}x)")
    ax.plot([0, lim], [0, lim], "k:", linewidth=1, label="1x")
    ax.set_xlabel("bound term  d^2 + d log2|disc| + S(modulus)/d^2")
    ax.set_ylabel("max element size after reduction (bits)")
    ax.set_title("Coefficient size containment")
    ax.legend(fontsize=8)
    fig.tight_layout()
    scatter_path = out_dir / "size_containment.png"
    fig.savefig(scatter_path, dpi=150)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(7, 4))
    ratios = [r.ratio for r in records]
    ax.hist(ratios, bins=40, color="#416a8c", edgecolor="white")
    ax.axvline(max(ratios), color="crimson", linewidth=1,
               label=f"worst observed {max(ratios):.3f}")
    ax.set_xlabel("size / bound term")
    ax.set_ylabel("cases")
    ax.set_title("Observed size ratio distribution")
    ax.legend(fontsize=8)
    fig.tight_layout()
    hist_path = out_dir / "size_ratio_hist.png"
    fig.savefig(hist_path, dpi=150)
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(7, 4))
    for k, name in enumerate(fields):
        pts = sorted((r.n, r.seconds) for r in records if r.field == name)
        ns = sorted({n for n, _ in pts})
        avg = [sum(s for n2, s in pts if n2 == n) / max(1, sum(1 for n2, _ in pts if n2 == n))
               for n in ns]
        ax.plot(ns, avg, "o-", label=name, color=colors[k % len(colors)])
    ax.set_xlabel("module dimension n")
    ax.set_ylabel("mean pipeline time (s)")
    ax.set_yscale("log")
    ax.set_title("Pipeline runtime by dimension")
    ax.legend(fontsize=8)
    fig.tight_layout()
    runtime_path = out_dir / "runtime_by_dimension.png"
    fig.savefig(runtime_path, dpi=150)
    plt.close(fig)

    return [scatter_path, hist_path, runtime_path]


def write_report(records, out_dir, ceiling=64.0):
    """CSV plus figures under ``out_dir``; returns all written paths."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    paths = [write_case_csv(records, out_dir / "selftest_cases.csv")]
    paths += render_figures(records, out_dir, ceiling=ceiling)
    return paths
