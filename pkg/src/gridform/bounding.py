"""Bounding parallelograms and corner scan sequences.

A configuration is enclosed, per admissible direction pair, in a smallest
parallelogram with grid-parallel sides. Reading the vertex multiplicities row
by row from a corner whose interior angle is canonical (60 degrees on the
triangular and hexagonal grids, 90 on the square one), short side first, gives
an integer sequence; the lexicographically smallest such sequence over the
minimum-height parallelograms is the configuration's signature. On the
hexagonal grid removed vertices simply read 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import lattice
from .config import Config
from .lattice import Point

PAIR_BASES: dict[str, tuple[tuple[Point, Point], ...]] = {
    "square": (((1, 0), (0, 1)),),
    "triangular": (((1, 0), (0, 1)), ((1, 0), (1, -1)), ((0, 1), (1, -1))),
    "hexagonal": (((1, 0), (0, 1)), ((1, 0), (1, -1)), ((0, 1), (1, -1))),
}


@dataclass(frozen=True)
class Box:
    """Smallest enclosing parallelogram for one direction pair, in basis coords."""

    u: Point
    v: Point
    smin: int
    smax: int
    tmin: int
    tmax: int

    @property
    def es(self) -> int:
        return self.smax - self.smin

    @property
    def et(self) -> int:
        return self.tmax - self.tmin

    @property
    def h(self) -> int:
        return min(self.es, self.et)

    @property
    def w(self) -> int:
        return max(self.es, self.et)

    def vertex(self, s: int, t: int) -> Point:
        return (
            s * self.u[0] + t * self.v[0],
            s * self.u[1] + t * self.v[1],
        )

    def coords(self, p: Point) -> tuple[int, int]:
        st = lattice.solve_frame(self.u, self.v, p)
        assert st is not None
        return st

    def contains(self, p: Point) -> bool:
        s, t = self.coords(p)
        return self.smin <= s <= self.smax and self.tmin <= t <= self.tmax


@dataclass(frozen=True)
class Frame:
    """A corner scan: corner vertex, short-side step, long-side step, extents."""

    corner: Point
    dh: Point
    dw: Point
    h: int
    w: int

    def vertex(self, k: int, m: int) -> Point:
        return (
            self.corner[0] + k * self.dh[0] + m * self.dw[0],
            self.corner[1] + k * self.dh[1] + m * self.dw[1],
        )

    def coords(self, p: Point) -> tuple[int, int]:
        km = lattice.solve_frame(self.dh, self.dw, (p[0] - self.corner[0], p[1] - self.corner[1]))
        assert km is not None
        return km


def bounding_parallelograms(config: Config) -> tuple[Box, ...]:
    out = []
    pts = config.support()
    for u, v in PAIR_BASES[config.kind]:
        ss = []
        ts = []
        for p in pts:
            st = lattice.solve_frame(u, v, p)
            assert st is not None
            ss.append(st[0])
            ts.append(st[1])
        out.append(Box(u, v, min(ss), max(ss), min(ts), max(ts)))
    return tuple(out)


def _segment_frames(kind: str, box: Box) -> tuple[Frame, ...]:
    # Degenerate parallelogram: a segment (two endpoint readings) or a point.
    if box.es == 0 and box.et == 0:
        corner = box.vertex(box.smin, box.tmin)
        return (Frame(corner, box.v, box.u, 0, 0),)
    if box.es == 0:
        lo, hi = box.vertex(box.smin, box.tmin), box.vertex(box.smin, box.tmax)
        d, n = box.v, box.et
        other = box.u
    else:
        lo, hi = box.vertex(box.smin, box.tmin), box.vertex(box.smax, box.tmin)
        d, n = box.u, box.es
        other = box.v
    neg = (-d[0], -d[1])
    return (Frame(lo, other, d, 0, n), Frame(hi, other, neg, 0, n))


def box_frames(kind: str, box: Box) -> tuple[Frame, ...]:
    """Admissible scans of one parallelogram, in deterministic candidate order."""
    if box.h == 0:
        return _segment_frames(kind, box)
    frames = []
    for cs, ct in ((box.smin, box.tmin), (box.smin, box.tmax), (box.smax, box.tmin), (box.smax, box.tmax)):
        corner = box.vertex(cs, ct)
        du = box.u if cs == box.smin else (-box.u[0], -box.u[1])
        dv = box.v if ct == box.tmin else (-box.v[0], -box.v[1])
        if not lattice.canonical_corner(kind, du, dv):
            continue
        if box.es <= box.et:
            frames.append(Frame(corner, du, dv, box.es, box.et))
        if box.et <= box.es:
            frames.append(Frame(corner, dv, du, box.et, box.es))
    frames.sort(key=lambda f: (f.corner, f.dh, f.dw))
    return tuple(frames)


def scan(config: Config, frame: Frame) -> tuple[int, ...]:
    """Multiplicities read short side first, then line by line."""
    counts = config.as_dict()
    out = []
    for m in range(frame.w + 1):
        for k in range(frame.h + 1):
            out.append(counts.get(frame.vertex(k, m), 0))
    return tuple(out)


@dataclass(frozen=True)
class MbpResult:
    """The minimum-height, smallest-sequence parallelogram scan of a configuration."""

    h: int
    w: int
    sequence: tuple[int, ...]
    frames: tuple[Frame, ...]  # every scan achieving the sequence

    @property
    def leading(self) -> Frame:
        return self.frames[0]


@lru_cache(maxsize=8192)
def mbp(config: Config) -> MbpResult:
    boxes = bounding_parallelograms(config)
    hmin = min(b.h for b in boxes)
    best_seq = None
    best_frames: list[Frame] = []
    for box in boxes:
        if box.h != hmin:
            continue
        for frame in box_frames(config.kind, box):
            seq = scan(config, frame)
            if best_seq is None or seq < best_seq:
                best_seq = seq
                best_frames = [frame]
            elif seq == best_seq:
                best_frames.append(frame)
    assert best_seq is not None
    f0 = best_frames[0]
    return MbpResult(f0.h, f0.w, best_seq, tuple(best_frames))


def lss(config: Config) -> tuple[int, ...]:
    return mbp(config).sequence


def scan_position(config: Config, p: Point) -> int:
    """Smallest 1-based index of vertex p across the achieving scans."""
    res = mbp(config)
    best = None
    for frame in res.frames:
        k, m = frame.coords(p)
        if 0 <= k <= frame.h and 0 <= m <= frame.w:
            idx = m * (frame.h + 1) + k + 1
            if best is None or idx < best:
                best = idx
    if best is None:
        raise ValueError(f"{p} is outside the parallelogram")
    return best


def box_distance(kind: str, box: Box, p: Point) -> int:
    """Grid-metric distance from p to the parallelogram region."""
    if box.contains(p):
        return 0
    best = None
    for s in range(box.smin, box.smax + 1):
        for t in (box.tmin, box.tmax):
            d = lattice.dist(kind, p, box.vertex(s, t))
            if best is None or d < best:
                best = d
    for t in range(box.tmin, box.tmax + 1):
        for s in (box.smin, box.smax):
            d = lattice.dist(kind, p, box.vertex(s, t))
            if best is None or d < best:
                best = d
    assert best is not None
    return best


def line_meets_box(kind: str, line: lattice.Line, box: Box) -> bool:
    """Whether the grid line intersects the parallelogram region (real geometry)."""
    axis, _level = line
    d = lattice.AXIS_DIRS[kind][axis]
    anchor = lattice.line_point(kind, line, 0)
    sa, ta = box.coords(anchor)
    sd_td = lattice.solve_frame(box.u, box.v, d)
    assert sd_td is not None
    sd, td = sd_td
    lo = Fraction(-(10 ** 18))
    hi = Fraction(10 ** 18)
    for aval, dval, vmin, vmax in ((sa, sd, box.smin, box.smax), (ta, td, box.tmin, box.tmax)):
        if dval == 0:
            if not vmin <= aval <= vmax:
                return False
            continue
        k1 = Fraction(vmin - aval, dval)
        k2 = Fraction(vmax - aval, dval)
        if k1 > k2:
            k1, k2 = k2, k1
        lo = max(lo, k1)
        hi = min(hi, k2)
    return lo <= hi
