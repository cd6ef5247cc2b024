"""Static figures for the CLI report path (matplotlib, Agg backend)."""

from __future__ import annotations

from pathlib import Path
from typing import Sequence

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .grid import GridBits, TileSystem  # noqa: E402

# fixed salt and no date stamp keep SVG output byte-identical between runs
matplotlib.rcParams.update({
    "svg.hashsalt": "kvisloc",
    "font.size": 9,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "figure.dpi": 100,
})
_META = {"Date": None, "Creator": None}


def _save(fig, path: Path) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(path, format="svg", metadata=_META, bbox_inches="tight")
    plt.close(fig)
    return path


def bracket_figure(rows: Sequence[dict], path: Path) -> Path:
    """Lower/upper cop counts and simulated clearing time against n."""
    ns = [r["n"] for r in rows]
    fig, (ax, ax2) = plt.subplots(2, 1, figsize=(6, 5), sharex=True)
    ax.step(ns, [r["lower"] for r in rows], where="mid", label="lower")
    ax.step(ns, [r["upper"] for r in rows], where="mid", label="upper", linestyle="--")
    ax.plot(ns, [r["h"] for r in rows], "o", ms=3, label="h (simulated)")
    ax.set_ylabel("cops")
    ax.legend(loc="upper left")
    ax.set_title(f"grid bracket, k = {rows[0]['k']}" if rows else "grid bracket")
    ax2.plot(ns, [r["sim_rounds"] if r["sim_rounds"] >= 0 else np.nan for r in rows], ".-")
    ax2.set_xlabel("n")
    ax2.set_ylabel("rounds to clear")
    return _save(fig, path)


def _mask_image(gb: GridBits, mask: int) -> np.ndarray:
    img = np.zeros((gb.n, gb.n))
    for x, y in gb.coords(mask):
        img[x - 1, y - 1] = 1.0
    return img


def infection_figure(n: int, k: int, frames: Sequence[int], path: Path, panels: int = 6) -> Path:
    """Snapshots of the surviving candidate set during a grid sweep."""
    gb = GridBits(n)
    if not frames:
        frames = [gb.valid]
    idx = sorted({round(i * (len(frames) - 1) / max(panels - 1, 1)) for i in range(panels)})
    fig, axes = plt.subplots(1, len(idx), figsize=(2 * len(idx), 2.2), squeeze=False)
    for ax, i in zip(axes[0], idx):
        ax.imshow(_mask_image(gb, frames[i]).T, origin="lower", cmap="Greys", vmin=0, vmax=1,
                  extent=(0.5, n + 0.5, 0.5, n + 0.5))
        ax.set_title(f"t = {i}")
        ax.set_xticks([])
        ax.set_yticks([])
        ax.grid(False)
    fig.suptitle(f"candidates on G({n},{n}), k = {k}")
    return _save(fig, path)


def tiling_figure(k: int, n: int, path: Path, width: int = 0) -> Path:
    """Tile labels inside the strip ``Z x [1, n]``, coloured by index mod period."""
    ts = TileSystem(k, n)
    width = width or 3 * ts.m
    img = np.full((width, n), np.nan)
    reps = width // ts.m + 2
    for i in range(-ts.period, reps * ts.period):
        for x, y in ts.tile(i, (1, width, 1, n)):
            img[x - 1, y - 1] = i % ts.period
    fig, ax = plt.subplots(figsize=(4 * width / max(n, 1), 4))
    ax.imshow(img.T, origin="lower", cmap="tab20", extent=(0.5, width + 0.5, 0.5, n + 0.5))
    ax.set_title(f"tiles, k = {k}, n = {n}")
    ax.grid(False)
    return _save(fig, path)
