"""Figures for the CLI report path, written straight to image files."""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
from matplotlib.patches import Rectangle  # noqa: E402

# fixed metadata keeps PNG/SVG/PDF bytes stable across runs
_META = {
    ".png": {"Software": None},
    ".svg": {"Date": None},
    ".pdf": {"CreationDate": None, "ModDate": None},
}


def _save(fig, path) -> None:
    path = str(path)
    ext = path[path.rfind(".") :].lower() if "." in path else ".png"
    kwargs = {"metadata": _META[ext]} if ext in _META else {}
    if ext == ".svg":
        plt.rcParams["svg.hashsalt"] = "assemblage"
    fig.savefig(path, dpi=120, bbox_inches="tight", **kwargs)
    plt.close(fig)


def plot_information(reports, path, title: str = "") -> None:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    xs = [r.pa for r in reports]
    ax.bar(xs, [r.bits for r in reports], color="0.35")
    ax.set_xlabel("assembly index")
    ax.set_ylabel("pathway information (bits)")
    ax.set_xticks(xs)
    if title:
        ax.set_title(title)
    _save(fig, path)


def plot_sweep(rows, path) -> None:
    fig, ax = plt.subplots(figsize=(5, 3.5))
    hs = [r.h for r in rows]
    ax.fill_between(hs, [r.p_q25 for r in rows], [r.p_q75 for r in rows], color="0.8", label="interquartile")
    ax.plot(hs, [r.p_median for r in rows], "o-", color="k", label="median")
    ax.set_yscale("log")
    ax.set_xlabel("bias h")
    ax.set_ylabel("most likely pathway probability")
    ax.set_title(f"depth {rows[0].depth}" if rows else "")
    ax.legend(frameon=False)
    _save(fig, path)


def plot_chain_lengths(table, path) -> None:
    fig, (left, right) = plt.subplots(1, 2, figsize=(9, 3.5))
    ns = range(1, table.limit + 1)
    left.scatter(ns, [table[n] for n in ns], s=2, color="k")
    left.set_xscale("log", base=2)
    left.set_xlabel("n")
    left.set_ylabel("minimal chain length")
    counts = table.counts
    right.bar(list(counts), list(counts.values()), color="0.35")
    right.set_xlabel("chain length")
    right.set_ylabel(f"integers <= {table.limit}")
    _save(fig, path)


def plot_assemblage(x, path, steps=()) -> None:
    """Draw the target and, when given, each pathway result in order."""
    shapes = [s.result for s in steps] or [x]
    fig, axes = plt.subplots(1, len(shapes), figsize=(1.6 * len(shapes), 1.8), squeeze=False)
    colours = sorted({k for shape in shapes for _, _, k in shape.cells})
    palette = plt.get_cmap("tab10")
    fill = {k: ("k" if k == "#" else palette(i % 10)) for i, k in enumerate(colours)}
    for ax, shape in zip(axes[0], shapes):
        h, w = shape.shape
        for r, c, k in shape.cells:
            ax.add_patch(Rectangle((c, h - 1 - r), 1, 1, facecolor=fill[k], edgecolor="0.6"))
        side = max(h, w)
        ax.set_xlim(0, side)
        ax.set_ylim(0, side)
        ax.set_aspect("equal")
        ax.axis("off")
    _save(fig, path)
