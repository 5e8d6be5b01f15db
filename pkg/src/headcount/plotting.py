"""Figure rendering for benchmark output.

The bench command's report path can drop a PNG next to the CSV: raw step
counts on a log-log scale plus the normalized series that should flatten
out if the acceptor meets its growth bound.
"""

from __future__ import annotations

import math

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt

# normalizers chosen so the plotted series approaches a constant
NORMALIZERS = {
    "ww": ("steps / n^2", lambda n: 1.0 / n**2),
    "palindrome2c": ("steps * log2(n) / n^2", lambda n: math.log2(n) / n**2),
    "lm": ("steps / n", lambda n: 1.0 / n),
}


def render_bench_figure(rows, acceptor: str, path) -> None:
    """Render (n, steps) benchmark rows to an image file."""
    ns = [row["n"] for row in rows]
    steps = [row["steps"] for row in rows]
    fig, (ax_raw, ax_norm) = plt.subplots(1, 2, figsize=(9, 3.6))
    ax_raw.plot(ns, steps, "o-")
    ax_raw.set_xscale("log")
    ax_raw.set_yscale("log")
    ax_raw.set_xlabel("input length n")
    ax_raw.set_ylabel("steps")
    ax_raw.set_title(f"{acceptor}: step counts")
    label, scale = NORMALIZERS.get(acceptor, ("steps / n", lambda n: 1.0 / n))
    ax_norm.plot(ns, [s * scale(n) for n, s in zip(ns, steps)], "s-")
    ax_norm.set_xscale("log")
    ax_norm.set_xlabel("input length n")
    ax_norm.set_ylabel(label)
    ax_norm.set_title("normalized")
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)
