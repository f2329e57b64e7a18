"""Figure rendering for the report path.

Each CLI command that emits a CSV/JSON report can also render a PNG
summarizing it: margin charts for relation checks, distribution plots for
the optimizer's best state, and a ranked margin strip for conjecture
probes. Rendering is headless (Agg) and deterministic: fixed size, fixed
dpi, no timestamps in the file metadata.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402  (backend must be set first)

_SAVE_OPTS = {"dpi": 110, "metadata": {"Software": None}}
_PASS_COLOR = "#2a7f3f"
_FAIL_COLOR = "#b23a2f"
_FLAG_COLOR = "#b8860b"


def _finite(values):
    return [v for v in values if math.isfinite(v)]


def margins_figure(rows: list[dict], path: str, title: str) -> None:
    """Bar chart of per-row margins, colored by pass/fail.

    Expects mapping rows with at least relation_id, margin, pass. Rows with
    non-finite margins (degenerate relations) are drawn at the top of the
    finite range and hatched.
    """
    margins = [row["margin"] for row in rows]
    finite = _finite(margins)
    cap = max(finite) if finite else 1.0
    heights = [m if math.isfinite(m) else cap for m in margins]
    colors = [_PASS_COLOR if row["pass"] else _FAIL_COLOR for row in rows]

    fig, ax = plt.subplots(figsize=(max(6.0, 0.08 * len(rows) + 4.0), 4.0))
    bars = ax.bar(range(len(rows)), heights, color=colors, width=0.9)
    for bar, margin in zip(bars, margins):
        if not math.isfinite(margin):
            bar.set_hatch("//")
            bar.set_alpha(0.4)
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("check index")
    ax.set_ylabel("margin (lhs - rhs)")
    ax.set_title(title)
    if len(rows) <= 12:
        ax.set_xticks(range(len(rows)))
        ax.set_xticklabels(
            [row["relation_id"] for row in rows], rotation=30, ha="right", fontsize=8
        )
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def densities_figure(
    dist_a, dist_b, path: str, title: str, labels: tuple[str, str] = ("A", "B")
) -> None:
    """Overlay the two observable distributions of one state."""
    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.plot(dist_a.centers(), dist_a.values, label=labels[0], linewidth=1.2)
    ax.plot(dist_b.centers(), dist_b.values, label=labels[1], linewidth=1.2)
    ax.set_xlabel("observable value")
    ax.set_ylabel("probability density")
    ax.set_title(title)
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)


def ranked_margins_figure(records: list[dict], path: str, title: str) -> None:
    """Sorted margin strip for conjecture probes.

    Finite margins only (degenerate records are vacuous); low-confidence
    records are drawn in a warning color.
    """
    finite = [r for r in records if math.isfinite(r["margin"])]
    finite.sort(key=lambda r: r["margin"])
    xs = range(len(finite))
    ys = [r["margin"] for r in finite]
    colors = [
        _FLAG_COLOR if r.get("low_confidence") else _PASS_COLOR for r in finite
    ]

    fig, ax = plt.subplots(figsize=(6.4, 4.0))
    ax.scatter(xs, ys, c=colors, s=14)
    ax.axhline(0.0, color="black", linewidth=0.8)
    ax.set_xlabel("record rank")
    ax.set_ylabel("margin (entropy sum - bound)")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(path, **_SAVE_OPTS)
    plt.close(fig)
