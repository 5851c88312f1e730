"""SVG snapshots of configurations and bare lattice patches.

Vertices are laid out in the plane with the oblique basis drawn at sixty
degrees, so triangular and hexagonal neighborhoods come out equilateral.
Rendering is headless (Agg) and always written to a file.
"""

from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
from matplotlib.patches import Circle

from . import lattice
from .config import Config
from .lattice import Point

_SIN60 = 3 ** 0.5 / 2

# Beyond this many background vertices the lattice is left undrawn.
_BACKGROUND_CAP = 20000


def plane(kind: str, p: Point) -> tuple[float, float]:
    a, b = p
    if kind == "square":
        return (float(a), float(b))
    return (a + b / 2, b * _SIN60)


def _patch_points(kind: str, size: int) -> list[Point]:
    return [
        (a, b)
        for a in range(size)
        for b in range(size)
        if lattice.is_vertex(kind, (a, b))
    ]


def _edges(kind: str, pts: set[Point]):
    for p in pts:
        for q in lattice.neighbors(kind, p):
            if q in pts and p < q:
                yield p, q


def render_patch(kind: str, size: int, path: str) -> int:
    """Draw a size x size patch of the bare grid; returns the vertex count."""
    lattice.check_kind(kind)
    pts = _patch_points(kind, size)
    ptset = set(pts)
    fig, ax = plt.subplots(figsize=(8, 8))
    for p, q in _edges(kind, ptset):
        xa, ya = plane(kind, p)
        xb, yb = plane(kind, q)
        ax.plot([xa, xb], [ya, yb], color="#b0b0b0", lw=0.7, zorder=1)
    for p in pts:
        ax.add_patch(Circle(plane(kind, p), 0.12, color="#305080", zorder=2))
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)
    return len(pts)


def render_config(config: Config, path: str, pattern: Config | None = None,
                  highlight: tuple[Point, ...] = (), note: str = "") -> None:
    """Draw one configuration, optionally with ghost pattern targets."""
    kind = config.kind
    pts = list(config.support())
    if pattern is not None:
        pts += list(pattern.support())
    amin = min(p[0] for p in pts) - 2
    amax = max(p[0] for p in pts) + 2
    bmin = min(p[1] for p in pts) - 2
    bmax = max(p[1] for p in pts) + 2
    fig, ax = plt.subplots(figsize=(9, 9))
    window = [
        (a, b)
        for a in range(amin, amax + 1)
        for b in range(bmin, bmax + 1)
        if lattice.is_vertex(kind, (a, b))
    ]
    if len(window) <= _BACKGROUND_CAP:
        wset = set(window)
        for p, q in _edges(kind, wset):
            xa, ya = plane(kind, p)
            xb, yb = plane(kind, q)
            ax.plot([xa, xb], [ya, yb], color="#d8d8d8", lw=0.5, zorder=1)
        xs = [plane(kind, p)[0] for p in window]
        ys = [plane(kind, p)[1] for p in window]
        ax.plot(xs, ys, ".", color="#c4c4c4", ms=2, lw=0, zorder=2)
    if pattern is not None:
        for p, c in pattern.cells:
            x, y = plane(kind, p)
            ax.plot([x], [y], "s", mfc="none", mec="#208040", ms=14, zorder=3)
            if c > 1:
                ax.text(x + 0.18, y + 0.18, str(c), color="#208040", fontsize=9)
    hl = set(highlight)
    for p, c in config.cells:
        x, y = plane(kind, p)
        face = "#c03030" if p in hl else "#202020"
        ax.add_patch(Circle((x, y), 0.18, color=face, zorder=4))
        if c > 1:
            ax.text(x - 0.4, y + 0.25, str(c), color="#c03030", fontsize=10,
                    zorder=5)
    if note:
        ax.set_title(note)
    ax.set_aspect("equal")
    ax.axis("off")
    fig.savefig(path, format="svg", bbox_inches="tight")
    plt.close(fig)
