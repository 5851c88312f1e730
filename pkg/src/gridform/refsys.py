"""Guard identification, reference systems, and pattern embedding.

The moving robots agree on a local coordinate frame built from the
configuration itself: a far guard pinned down by its distance sum, the unique
grid line it induces over the others' bounding parallelograms, a promoted
second guard, and an origin where the two axes meet. Targets are obtained by
dropping the pattern's minimal parallelogram scan onto the frame. Everything
here is exact integer arithmetic; every tie-break goes through scan-frame
coordinates so the derived data commutes with grid isometries.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import bounding, lattice
from .bounding import Box, Frame
from .config import Config, sum_of_distances
from .lattice import Point


def frame_key(config: Config, p: Point):
    """Isometry-invariant comparison key for an arbitrary vertex."""
    best = None
    for f in bounding.mbp(config).frames:
        k, m = f.coords(p)
        cand = (m, k)
        if best is None or cand < best:
            best = cand
    return best


def identify_first_guard(config: Config) -> Point:
    """The robot with the largest distance sum; scan position breaks ties."""
    best = None
    best_key = None
    for p, _ in config.cells:
        key = (-sum_of_distances(config, p), bounding.scan_position(config, p), p)
        if best_key is None or key < best_key:
            best, best_key = p, key
    assert best is not None
    return best


@dataclass(frozen=True)
class InducedLine:
    axis: int
    line: lattice.Line  # through the guard along the unique qualifying axis
    guard: Point


def eval_induced_line(config: Config, guard: Point | None = None,
                      pattern: Config | None = None) -> InducedLine | None:
    """The unique axis whose line through the far guard meets every bounding
    parallelogram of the other robots.

    On the hexagonal grid the witness line may pass through one of the guard's
    neighbors instead; the induced line itself stays anchored at the guard.

    Once every other robot stands above the line (middle targets filled, the
    second guard descending) the boxes detach from it and the intersection
    test goes blind; with the pattern in hand the line is then recovered
    structurally, as the unique axis whose sliding embedding matches the
    standing robots exactly."""
    if guard is None:
        guard = identify_first_guard(config)
    others = config.remove(guard)
    if others.n == 0:
        return None
    boxes = bounding.bounding_parallelograms(others)
    anchors = [guard]
    if config.kind == "hexagonal":
        anchors += list(lattice.neighbors(config.kind, guard))
    hits = []
    for axis in range(len(lattice.AXIS_DIRS[config.kind])):
        for anchor in anchors:
            line = (axis, lattice.transverse(config.kind, axis, anchor))
            if all(bounding.line_meets_box(config.kind, line, b) for b in boxes):
                hits.append(axis)
                break
    if len(hits) == 1:
        axis = hits[0]
        return InducedLine(
            axis, (axis, lattice.transverse(config.kind, axis, guard)), guard
        )
    if hits or pattern is None or others.n < 2:
        return None
    wf = bounding.mbp(pattern).w
    if min(lattice.dist(config.kind, guard, p) for p in others.support()) < 3 * wf:
        return None
    axes_hit = []
    for axis in range(len(lattice.AXIS_DIRS[config.kind])):
        level = lattice.transverse(config.kind, axis, guard)
        if _middle_match_hits(config, guard, others, axis, level, pattern):
            axes_hit.append(axis)
    if len(axes_hit) != 1:
        return None
    axis = axes_hit[0]
    return InducedLine(
        axis, (axis, lattice.transverse(config.kind, axis, guard)), guard
    )


@dataclass(frozen=True)
class RefSys:
    origin: Point
    dx: Point
    dy: Point
    first_guard: Point
    second_guard: Point | None
    axis_line: lattice.Line  # the X-axis as a grid line
    tie_branch: bool = False

    def to_frame(self, p: Point) -> tuple[int, int]:
        xy = lattice.solve_frame(self.dx, self.dy, (p[0] - self.origin[0], p[1] - self.origin[1]))
        assert xy is not None
        return xy

    def from_frame(self, x: int, y: int) -> Point:
        return (
            self.origin[0] + x * self.dx[0] + y * self.dy[0],
            self.origin[1] + x * self.dx[1] + y * self.dy[1],
        )


def _canonical_partners(kind: str, dx: Point) -> tuple[Point, Point]:
    """The two unit directions forming the scan corner angle with dx."""
    out = []
    for d in lattice.AXIS_DIRS[kind]:
        for cand in (d, (-d[0], -d[1])):
            if lattice.canonical_corner(kind, dx, cand):
                out.append(cand)
    assert len(out) == 2
    return out[0], out[1]


def _orient_dx(kind: str, axis: int, guard: Point, others: Config) -> Point | None:
    """Unit step along the axis pointing from the guard toward the others."""
    d = lattice.AXIS_DIRS[kind][axis]
    ga = lattice.along(kind, axis, guard)
    vals = [lattice.along(kind, axis, p) for p in others.support()]
    if ga < min(vals):
        return d
    if ga > max(vals):
        return (-d[0], -d[1])
    return None


def _pick_dy(kind: str, dx: Point, axis: int, x_level: int, away_from, toward=None):
    """Canonical partner of dx on the requested side of the X-axis.

    `away_from` is an iterable of points whose side dy must avoid; `toward`
    (if given) wins instead. Returns None when the side is ambiguous.
    """
    c1, c2 = _canonical_partners(kind, dx)
    sides = {}
    for cand in (c1, c2):
        sides[cand] = lattice.transverse(kind, axis, cand)  # +-1 per step
    if toward is not None:
        sgn = 1 if toward > 0 else -1
        for cand, s in sides.items():
            if (1 if s > 0 else -1) == sgn:
                return cand
        return None
    sgn = 0
    for p in away_from:
        t = lattice.transverse(kind, axis, p) - x_level
        if t:
            sgn = 1 if t > 0 else -1
            break
    if sgn == 0:
        return None
    for cand, s in sides.items():
        if (1 if s > 0 else -1) == -sgn:
            return cand
    return None


def _hex_origin(config: Config, pattern: Config, axis_line: lattice.Line,
                dx: Point, dy: Point, anchor: Point) -> Point | None:
    """First graph vertex along the axis from its crossing with the line
    through `anchor`, whose class matches the pattern's leading corner class.

    Walking along the axis keeps the origin on it, which the far guard's
    anchoring distance and the frame's row bookkeeping both rely on."""
    dy_axis, _ = lattice.axis_of(config.kind, dy)
    y_line = (dy_axis, lattice.transverse(config.kind, dy_axis, anchor))
    start = lattice.line_intersection(config.kind, axis_line, y_line)
    if start is None:
        return None
    want = pattern_corner_type(pattern)
    v = start
    for _ in range(6):
        if lattice.vertex_type(v, dy) == want:
            return v
        v = (v[0] + dx[0], v[1] + dx[1])
    return None


def pattern_corner_type(pattern: Config) -> int:
    f = bounding.mbp(pattern).leading
    return lattice.vertex_type(f.corner, f.dh)


@dataclass(frozen=True)
class PromotionBranch:
    line_level: int      # supporting line this branch is anchored on
    reduced_level: int   # support of the others minus the candidate, same side
    candidate: Point


def _promotion_branches(config: Config, others: Config, axis: int, guard: Point):
    """Second-guard candidates: per enclosing parallelogram spanned with the
    induced axis, the far short side's corner with the scan angle picks one
    supporting parallel; the candidate is the side robot nearest that line."""
    kind = config.kind
    u = lattice.AXIS_DIRS[kind][axis]
    taus = {p: lattice.transverse(kind, axis, p) for p in others.support()}
    branches: list[PromotionBranch] = []
    for pair in bounding.PAIR_BASES[kind]:
        if u not in pair and (-u[0], -u[1]) not in pair:
            continue
        v = pair[1] if (pair[0] == u or pair[0] == (-u[0], -u[1])) else pair[0]
        uu = pair[0] if pair[1] == v else pair[1]
        coords = {p: lattice.solve_frame(uu, v, p) for p in others.support()}
        svals = [st[0] for st in coords.values()]
        smin, smax = min(svals), max(svals)
        sg = lattice.solve_frame(uu, v, guard)
        assert sg is not None
        d_lo, d_hi = abs(sg[0] - smin), abs(sg[0] - smax)
        if smin == smax:
            # Zero extent along the axis direction: the two far-side choices
            # coincide, so the one side carries both shared-parallel corners.
            s_far = smin
            du = uu if sg[0] > smin else (-uu[0], -uu[1])
        elif d_lo == d_hi:
            continue
        else:
            s_far = smin if d_lo > d_hi else smax
            du = uu if s_far == smin else (-uu[0], -uu[1])
        side = [p for p, st in coords.items() if st[0] == s_far]
        tvals = [st[1] for st in coords.values()]
        tmin, tmax = min(tvals), max(tvals)
        corner_ts = [tmin] if tmin == tmax else [tmin, tmax]
        for tc in corner_ts:
            dvs = [v, (-v[0], -v[1])] if tmin == tmax else [v if tc == tmin else (-v[0], -v[1])]
            if not any(lattice.canonical_corner(kind, du, dv) for dv in dvs):
                continue
            cx = s_far * uu[0] + tc * v[0], s_far * uu[1] + tc * v[1]
            level = lattice.transverse(kind, axis, cx)
            ranked = sorted(side, key=lambda p: (abs(taus[p] - level), frame_key(config, p)))
            if len(ranked) > 1 and abs(taus[ranked[0]] - level) == abs(taus[ranked[1]] - level):
                continue
            cand = ranked[0]
            rest = [taus[p] for p in others.support() if p != cand]
            if not rest:
                continue
            tau_all = [taus[p] for p in others.support()]
            reduced = max(rest) if level == max(tau_all) else min(rest)
            branches.append(PromotionBranch(level, reduced, cand))
    # Same branch can arise from both parallelograms in degenerate layouts.
    uniq = {}
    for b in branches:
        uniq[(b.line_level, b.reduced_level, b.candidate)] = b
    return list(uniq.values())


def rs_promotion(config: Config, pattern: Config) -> RefSys | None:
    """Reference system built by promoting a second guard out of the others
    (drives the anchoring task and the climb that follows it)."""
    kind = config.kind
    guard = identify_first_guard(config)
    ind = eval_induced_line(config, guard, pattern)
    if ind is None:
        return None
    others = config.remove(guard)
    if others.n < 2:
        return None
    branches = _promotion_branches(config, others, ind.axis, guard)
    if not branches:
        return None
    branches.sort(
        key=lambda b: (
            abs(lattice.transverse(kind, ind.axis, guard) - b.reduced_level),
            frame_key(config, b.candidate),
        )
    )
    tie = (
        len(branches) > 1
        and abs(lattice.transverse(kind, ind.axis, guard) - branches[0].reduced_level)
        == abs(lattice.transverse(kind, ind.axis, guard) - branches[1].reduced_level)
    )
    sel = branches[0]
    axis_line = (ind.axis, sel.reduced_level)
    dx = _orient_dx(kind, ind.axis, guard, others)
    if dx is None:
        return None
    workers = others.remove(sel.candidate)
    dy = _pick_dy(kind, dx, ind.axis, sel.reduced_level, workers.support())
    if dy is None:
        # Workers sit on the axis itself. The frame must not flip while the
        # promoted robot climbs, so orient toward its current side; failing
        # that, away from the far guard; failing that, any fixed choice works
        # because the whole configuration is collinear on the axis.
        off = lattice.transverse(kind, ind.axis, sel.candidate) - sel.reduced_level
        if off:
            dy = _pick_dy(kind, dx, ind.axis, sel.reduced_level, (), toward=off)
        else:
            off = lattice.transverse(kind, ind.axis, guard) - sel.reduced_level
            if off:
                dy = _pick_dy(kind, dx, ind.axis, sel.reduced_level, (), toward=-off)
    if dy is None:
        dy = min(_canonical_partners(kind, dx))
    if kind == "hexagonal":
        far = max(
            workers.support(),
            key=lambda p: (lattice.dist(kind, guard, p), frame_key(config, p)),
        )
        origin = _hex_origin(config, pattern, axis_line, dx, dy, far)
    else:
        dy_axis, _ = lattice.axis_of(kind, dy)
        y_line = (dy_axis, lattice.transverse(kind, dy_axis, sel.candidate))
        origin = lattice.line_intersection(kind, axis_line, y_line)
    if origin is None:
        return None
    return RefSys(origin, dx, dy, guard, sel.candidate, axis_line, tie)


def rs_ranked(config: Config, pattern: Config) -> RefSys | None:
    """Reference system recovered from distance sums once both guards stand
    clear: far guard = largest sum, second guard = next largest."""
    kind = config.kind
    guard = identify_first_guard(config)
    ind = eval_induced_line(config, guard, pattern)
    if ind is None:
        return None
    others = config.remove(guard)
    if others.n < 2:
        return None
    second = None
    best_key = None
    for p, _ in others.cells:
        key = (-sum_of_distances(config, p), bounding.scan_position(config, p), p)
        if best_key is None or key < best_key:
            second, best_key = p, key
    assert second is not None
    dx = _orient_dx(kind, ind.axis, guard, others)
    if dx is None:
        return None
    workers = others.remove(second)
    off = lattice.transverse(kind, ind.axis, second) - ind.line[1]
    if off == 0:
        dy = _pick_dy(kind, dx, ind.axis, ind.line[1], workers.support())
    else:
        dy = _pick_dy(kind, dx, ind.axis, ind.line[1], (), toward=off)
    if dy is None:
        return None
    if kind == "hexagonal":
        origin = _hex_origin(config, pattern, ind.line, dx, dy, second)
    else:
        dy_axis, _ = lattice.axis_of(kind, dy)
        y_line = (dy_axis, lattice.transverse(kind, dy_axis, second))
        origin = lattice.line_intersection(kind, ind.line, y_line)
    if origin is None:
        return None
    return RefSys(origin, dx, dy, guard, second, ind.line)


@dataclass(frozen=True)
class PatternEmbed:
    """The pattern dropped onto a reference frame, targets in ascending order."""

    targets_frame: tuple[tuple[int, int], ...]  # expanded, lex sorted, x-major
    targets_axial: tuple[Point, ...]
    sequence: tuple[int, ...]        # pattern parallelogram scan
    first_dec: tuple[int, ...]       # same scan with the first nonzero lowered
    first_pos: int                   # 1-based position of that first nonzero
    h: int
    w: int


def embed_pattern(rs: RefSys, pattern: Config) -> PatternEmbed:
    res = bounding.mbp(pattern)
    seq = res.sequence
    fpos = next(i for i, val in enumerate(seq) if val)
    dec = list(seq)
    dec[fpos] -= 1
    targets = []
    for m in range(res.w + 1):
        for k in range(res.h + 1):
            c = seq[m * (res.h + 1) + k]
            targets.extend([(m, k)] * c)
    targets.sort()
    axial = tuple(rs.from_frame(x, y) for x, y in targets)
    return PatternEmbed(tuple(targets), axial, seq, tuple(dec), fpos + 1, res.h, res.w)


def middle_required(embed: PatternEmbed, j: int) -> int:
    """Robots needed at target j's vertex counting only targets j..n-2
    (0-based; the last target is reserved for the second guard)."""
    v = embed.targets_frame[j]
    n = len(embed.targets_frame)
    return sum(1 for k in range(j, n - 1) if embed.targets_frame[k] == v)


def matched_state(rs: RefSys, embed: PatternEmbed, workers: Config):
    """Occupancy of the middle targets by the worker multiset.

    Returns (largest unmatched middle index or None, worker frame coords
    sorted ascending). Indices are 0-based into the expanded target list.
    """
    counts = {}
    for p, c in workers.cells:
        counts[rs.to_frame(p)] = c
    n = len(embed.targets_frame)
    largest = None
    for j in range(n - 2, 0, -1):
        v = embed.targets_frame[j]
        if counts.get(v, 0) < middle_required(embed, j):
            largest = j
            break
    sorted_workers = []
    for p, c in workers.cells:
        sorted_workers.extend([rs.to_frame(p)] * c)
    sorted_workers.sort()
    return largest, sorted_workers


def compute_delta(rs: RefSys, config: Config, pattern: Config) -> int:
    """Clearance unit: widest extent of the workers still in the closed
    negative quadrant, or of the pattern parallelogram, whichever is larger."""
    workers = config.remove(rs.first_guard)
    if rs.second_guard is not None:
        workers = workers.remove(rs.second_guard)
    xs, ys = [], []
    for p, _ in workers.cells:
        x, y = rs.to_frame(p)
        if x <= 0 and y <= 0:
            xs.append(x)
            ys.append(y)
    spread = 0
    if xs:
        spread = max(max(xs) - min(xs), max(ys) - min(ys))
    return max(spread, bounding.mbp(pattern).w)


def _middle_match_hits(config: Config, guard: Point, others: Config,
                       axis: int, level: int, pattern: Config) -> list:
    """Slides of the pattern corner along the line (axis, level) where the
    middle targets are exactly the standing robots with one leftover."""
    kind = config.kind
    line = (axis, level)
    dx = _orient_dx(kind, axis, guard, others)
    if dx is None:
        return []
    dy = _pick_dy(
        kind, dx, axis, level, (), toward=_side_of_most(kind, axis, level, others)
    )
    if dy is None:
        return []
    res = bounding.mbp(pattern)
    alongs = [lattice.along(kind, axis, p) for p in others.support()]
    lo = min(alongs) - res.w - 2
    hi = max(alongs) + res.w + 2
    hits = []
    for s in range(lo, hi + 1):
        origin = lattice.line_point(kind, line, s)
        cand_rs = RefSys(origin, dx, dy, guard, None, line)
        embed = embed_pattern(cand_rs, pattern)
        if kind == "hexagonal" and any(
            not lattice.is_vertex(kind, p) for p in embed.targets_axial
        ):
            continue
        leftover = _exact_middle_match(cand_rs, embed, others)
        if leftover is not None:
            hits.append((cand_rs, embed, leftover))
    return hits


def rs_anchor(config: Config, pattern: Config) -> tuple[RefSys, PatternEmbed] | None:
    """Reference system recovered by sliding the pattern's corner along the
    induced line until the middle targets are exactly the standing robots,
    with a single robot left over (the second guard)."""
    guard = identify_first_guard(config)
    ind = eval_induced_line(config, guard, pattern)
    if ind is None:
        return None
    others = config.remove(guard)
    if others.n < 2:
        return None
    hits = _middle_match_hits(config, guard, others, ind.axis, ind.line[1], pattern)
    if not hits:
        return None
    hits.sort(key=lambda item: frame_key(config, item[0].origin))
    rs, embed, leftover = hits[0]
    rs = RefSys(rs.origin, rs.dx, rs.dy, rs.first_guard, leftover, rs.axis_line)
    return rs, embed_pattern(rs, pattern)


def _side_of_most(kind: str, axis: int, level: int, others: Config) -> int:
    for p in others.support():
        t = lattice.transverse(kind, axis, p) - level
        if t:
            return 1 if t > 0 else -1
    return 1


@dataclass(frozen=True)
class CompletionBranch:
    """One guard-anchored enclosing parallelogram and its scan."""

    line_level: int
    frame: Frame
    sequence: tuple[int, ...]
    guard_pos: int  # 1-based scan index of the walking guard
    guard: Point


@dataclass(frozen=True)
class CompletionData:
    branches: tuple[CompletionBranch, ...]
    first_dec: tuple[int, ...]
    first_pos: int  # 1-based first-target position in the pattern scan


def pattern_first_data(pattern: Config) -> tuple[tuple[int, ...], tuple[int, ...], int]:
    """Pattern scan, the same scan with its first nonzero lowered by one, and
    that entry's 1-based position."""
    seq = bounding.mbp(pattern).sequence
    fpos = next(i for i, val in enumerate(seq) if val)
    dec = list(seq)
    dec[fpos] -= 1
    return seq, tuple(dec), fpos + 1


def surplus_position(seq: tuple[int, ...], base: tuple[int, ...]) -> int | None:
    """1-based position of the single extra robot when `seq` equals `base`
    right-aligned into zeros plus exactly one additional 1; else None."""
    pad = len(seq) - len(base)
    if pad < 0:
        return None
    pos = None
    for i, val in enumerate(seq):
        want = base[i - pad] if i >= pad else 0
        d = val - want
        if d == 0:
            continue
        if d == 1 and pos is None:
            pos = i + 1
            continue
        return None
    return pos


def t6_data(config: Config, pattern: Config) -> CompletionData | None:
    """The enclosing parallelograms whose short side is the pattern box height
    and whose long side lies on a supporting parallel of all robots but one,
    cornered at that lone robot's short side; absent when nothing fits.

    The walking guard is identified by the geometry of each scan alone, since
    its distance sum drops below the others' once it approaches the pattern."""
    kind = config.kind
    pat_seq, pat_dec, first_pos = pattern_first_data(pattern)
    hf = bounding.mbp(pattern).h
    branches: list[CompletionBranch] = []
    for guard in config.support():
        if config.count(guard) != 1:
            continue
        others = config.remove(guard)
        if others.n == 0:
            continue
        for axis in range(len(lattice.AXIS_DIRS[kind])):
            u = lattice.AXIS_DIRS[kind][axis]
            taus = [lattice.transverse(kind, axis, p) for p in others.support()]
            lo, hi = min(taus), max(taus)
            levels = [
                (lo, (1,) if lo != hi else (1, -1)),
                (hi, (-1,) if lo != hi else ()),
            ]
            for level, sigmas in levels:
                for sigma in sigmas:
                    offs = {
                        p: (lattice.transverse(kind, axis, p) - level) * sigma
                        for p in config.support()
                    }
                    if any(
                        o < 0 or o > hf for p, o in offs.items() if p != guard
                    ):
                        continue
                    # A walker zigzagging along the last row dips one row
                    # outside the box; scan it as if lifted into its slot.
                    dipped = kind == "hexagonal" and offs[guard] == hf + 1
                    if not dipped and not 0 <= offs[guard] <= hf:
                        continue
                    for v_axis in range(len(lattice.AXIS_DIRS[kind])):
                        if v_axis == axis:
                            continue
                        v = lattice.AXIS_DIRS[kind][v_axis]
                        if lattice.transverse(kind, axis, v) != sigma:
                            v = (-v[0], -v[1])
                        svals = {
                            p: lattice.solve_frame(u, v, p)[0]
                            for p in config.support()
                        }
                        smin = min(svals.values())
                        smax = max(svals.values())
                        if svals[guard] == smin:
                            u_int = u
                        elif svals[guard] == smax:
                            u_int = (-u[0], -u[1])
                        else:
                            continue
                        if not lattice.canonical_corner(kind, u_int, v):
                            continue
                        corner = (
                            guard[0] - offs[guard] * v[0],
                            guard[1] - offs[guard] * v[1],
                        )
                        wp = smax - smin
                        cands = [Frame(corner, v, u_int, hf, wp)]
                        if hf == wp:
                            cands.append(Frame(corner, u_int, v, wp, hf))
                        scored = []
                        for fr in cands:
                            if dipped:
                                if fr.dh != v:
                                    continue
                                k, m = fr.coords(guard)
                                k = hf
                                gpos = m * (fr.h + 1) + k + 1
                                seq = list(bounding.scan(others, fr))
                                seq[gpos - 1] += 1
                                seq = tuple(seq)
                            else:
                                seq = bounding.scan(config, fr)
                                k, m = fr.coords(guard)
                                gpos = m * (fr.h + 1) + k + 1
                            scored.append((gpos, seq, fr))
                        if not scored:
                            continue
                        scored.sort(key=lambda item: (item[0], item[1]))
                        gpos, seq, fr = scored[0]
                        # The box must be wide enough to hold the pattern and
                        # the hole for its first target must be a grid vertex,
                        # or this embedding can never complete.
                        pad = len(seq) - len(pat_dec)
                        if pad < 0:
                            continue
                        gidx = pad + first_pos
                        hh = fr.h + 1
                        hole = fr.vertex((gidx - 1) % hh, (gidx - 1) // hh)
                        if not lattice.is_vertex(kind, hole):
                            continue
                        branches.append(CompletionBranch(level, fr, seq, gpos, guard))
    uniq: dict = {}
    for b in branches:
        uniq[(b.frame, b.sequence)] = b
    out = sorted(uniq.values(), key=lambda b: (b.sequence, b.guard_pos))
    if not out:
        return None
    return CompletionData(tuple(out), pat_dec, first_pos)


def completion_candidates(config: Config, pattern: Config):
    """For the final approach: (mover vertex, target vertex, frame) triples,
    one per guard-cornered scan in which the configuration reads as the
    pattern minus its first target plus the far guard sitting level with it
    in the leading columns."""
    data = t6_data(config, pattern)
    if data is None:
        return None, None
    offsets = (0,)
    if config.kind == "hexagonal":
        # The walker's zigzag wanders one row off the slot row; one row above
        # only reads cleanly when the slot is not in the scan's top row.
        hf = bounding.mbp(pattern).h
        offsets = (0, 1) + ((-1,) if (data.first_pos - 1) % (hf + 1) >= 1 else ())
    out = []
    pos = None
    for b in data.branches:
        sp = surplus_position(b.sequence, data.first_dec)
        if sp is None or sp != b.guard_pos:
            continue
        if all(b.guard_pos != data.first_pos + off for off in offsets):
            continue
        pad = len(b.sequence) - len(data.first_dec)
        gidx = pad + data.first_pos  # 1-based index of the missing first target
        hh = b.frame.h + 1
        mover = b.guard
        target = b.frame.vertex((gidx - 1) % hh, (gidx - 1) // hh)
        if not lattice.is_vertex(config.kind, target):
            continue
        pos = sp
        if (mover, target, b) not in out:
            out.append((mover, target, b))
    if not out:
        return None, None
    return pos, tuple(out)


def finisher_aligned(config: Config, pattern: Config) -> bool:
    """Whether some guard-cornered scan reads as the pattern scan with its
    first target's robot standing level with the hole in the leading columns."""
    _, cands = completion_candidates(config, pattern)
    return cands is not None


def _exact_middle_match(rs: RefSys, embed: PatternEmbed, others: Config) -> Point | None:
    """If the others are exactly the middle targets plus one leftover robot,
    return the leftover's vertex."""
    need: dict[tuple[int, int], int] = {}
    n = len(embed.targets_frame)
    for j in range(1, n - 1):
        v = embed.targets_frame[j]
        need[v] = need.get(v, 0) + 1
    have: dict[tuple[int, int], int] = {}
    for p, c in others.cells:
        have[rs.to_frame(p)] = c
    leftover = None
    extra = 0
    for v, c in have.items():
        delta = c - need.get(v, 0)
        if delta < 0:
            return None
        if delta > 0:
            extra += delta
            leftover = v
    if extra != 1:
        return None
    for v, c in need.items():
        if have.get(v, 0) < c:
            return None
    return rs.from_frame(*leftover)
