"""Chart rendering for the benchmark CSV outputs.

Renders with the Agg backend straight to files; one figure per report,
written next to the delimited output.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

_SERIES_STYLE = {
    "tunable": dict(color="#1f6f43", marker="o"),
    "unoptimized": dict(color="#8a6d1d", marker="s"),
    "bit-sampling": dict(color="#7a4b9e", marker="^"),
    "static": dict(color="#9a3b3b", marker="x"),
}


def _style(name: str) -> dict:
    return _SERIES_STYLE.get(name, dict(marker="o"))


def render_store_benchmark(rows: list[list], path) -> None:
    """Pages per query, and the fetch/tune time split when timing ran."""
    parameter = rows[0][0] if rows else "value"
    series: dict[str, list] = {}
    for row in rows:
        series.setdefault(row[2], []).append(row)
    timed = any(row[5] is not None for row in rows)
    ncols = 2 if timed else 1
    fig, axes = plt.subplots(1, ncols, figsize=(6 * ncols, 4.2), squeeze=False)
    ax = axes[0][0]
    for name, sub in series.items():
        ax.plot(
            [r[1] for r in sub],
            [r[8] for r in sub],
            label=name,
            **_style(name),
        )
    ax.set_xlabel(parameter)
    ax.set_ylabel("mean pages touched per query")
    ax.legend()
    ax.grid(alpha=0.3)
    if timed:
        ax = axes[0][1]
        for name, sub in series.items():
            totals = [
                (r[5] or 0) + (r[6] or 0) + (r[7] or 0) for r in sub
            ]
            ax.plot(
                [r[1] for r in sub],
                [t / 1e6 for t in totals],
                label=f"{name} total",
                **_style(name),
            )
            ax.plot(
                [r[1] for r in sub],
                [(r[6] or 0) / 1e6 for r in sub],
                linestyle="--",
                alpha=0.6,
                label=f"{name} tune",
                color=_style(name).get("color"),
            )
        ax.set_xlabel(parameter)
        ax.set_ylabel("mean per-query time (ms)")
        ax.legend(fontsize=8)
        ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def render_accuracy(rows: list[list], path) -> None:
    """Collision probability for near pairs, per hasher, over the sweep."""
    parameter = rows[0][0] if rows else "value"
    series: dict[str, list] = {}
    for row in rows:
        series.setdefault(row[2], []).append(row)
    fig, ax = plt.subplots(figsize=(6.4, 4.2))
    for name, sub in series.items():
        ax.plot(
            [r[1] for r in sub],
            [r[5] for r in sub],
            label=name,
            **_style(name),
        )
    theta = rows[0][6] if rows else 0.2
    x = rows[0][7] if rows else 0.1
    ax.set_xlabel(parameter)
    ax.set_ylabel(f"Pr(page distance <= {theta} | access distance <= {x})")
    ax.set_ylim(0.0, 1.05)
    ax.legend()
    ax.grid(alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
