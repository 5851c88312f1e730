"""Snapshot classifier and move planner.

Each Look yields a full snapshot; this module turns one snapshot plus the
goal multiset into a task number and at most one robot's next edge. The rule
is a strict priority list: the highest true precondition wins, so every
snapshot lands in exactly one task. All choices route through scan-frame
tie-breaks, keeping the decision equivariant under grid isometries whenever
the snapshot itself is asymmetric.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import bounding, lattice, refsys, symmetry
from .config import Config, apply_move, sum_of_distances
from .lattice import Point


class DecisionError(RuntimeError):
    """The rule reached a state it treats as unreachable (surfaced, not hidden)."""


@dataclass(frozen=True)
class Command:
    """One robot's planned move: the final destination and the next edge.

    allow_count is the number of robots sanctioned to stand on `dest` after
    arrival; the harness flags any multiplicity beyond it.
    """

    mover: Point
    dest: Point
    step: Point
    task: int
    allow_count: int = 1


@dataclass
class Evaluation:
    task: int
    variables: dict
    command: Command | None
    note: str = ""


def _with_robot(config: Config, p: Point) -> Config:
    items = dict(config.as_dict())
    items[p] = items.get(p, 0) + 1
    return Config.from_counts(config.kind, items)


def _fk(config: Config):
    return lambda v: refsys.frame_key(config, v)


def _fixes_point(m, t, p: Point) -> bool:
    q = lattice.mat_vec(m, p)
    return (q[0] + t[0], q[1] + t[1]) == p


def _sym_safe(config: Config, mover: Point, step: Point,
              pattern: Config | None = None) -> bool:
    """Whether standing the mover at step keeps every symmetry of the
    resulting snapshot pinned on the mover.

    Two robots swapped by an isometry of one snapshot can be activated
    together, so a walk may only create symmetries that fix the walker.
    The move that completes the pattern is exempt: once formed, nobody
    moves again, so a symmetry of the goal itself is harmless."""
    if step == mover:
        return True
    d = config.remove(mover).as_dict()
    d[step] = d.get(step, 0) + 1
    new = Config(config.kind, tuple(sorted(d.items())))
    if all(_fixes_point(m, t, step) for m, t in symmetry.automorphisms(new)):
        return True
    return pattern is not None and symmetry.similar(new, pattern) is not None


def _sym_checked(config: Config, mover: Point, route, err: str,
                 pattern: Config | None = None) -> tuple[Point, ...]:
    """route(banned) plans a path around the banned vertices; reroutes until
    the whole path is symmetry-safe.

    Checking every waypoint, not just the next step, keeps successive
    snapshots planning through the same safe subgraph, so the walk cannot
    bounce between two detours around an unsafe vertex."""
    banned: set[Point] = set()
    for _ in range(24):
        path = route(frozenset(banned))
        if path is None or len(path) < 2:
            raise DecisionError(err)
        bad = [p for p in path[1:] if not _sym_safe(config, mover, p, pattern)]
        if not bad:
            return path
        banned.update(bad)
    raise DecisionError(err)


def _frame_box(fr: bounding.Frame) -> bounding.Box:
    s0, t0 = lattice.solve_frame(fr.dh, fr.dw, fr.corner)
    return bounding.Box(fr.dh, fr.dw, min(s0, s0 + fr.h), max(s0, s0 + fr.h),
                        min(t0, t0 + fr.w), max(t0, t0 + fr.w))


def _guard_region_clearance(kind: str, others: Config, guard: Point) -> int:
    boxes = {_frame_box(fr) for fr in bounding.mbp(others).frames}
    return min(bounding.box_distance(kind, b, guard) for b in boxes)


def _workers_in_position(rs: refsys.RefSys, embed: refsys.PatternEmbed,
                         workers: Config) -> bool:
    """Monotone-staircase witness: the next robot to place can still reach its
    target moving only up and right, and everything below it is tucked into
    the closed lower-left quadrant."""
    largest, ordered = refsys.matched_state(rs, embed, workers)
    if largest is None:
        return True
    rx, ry = ordered[largest - 1]
    tx, ty = embed.targets_frame[largest]
    if rx > tx or ry > ty:
        return False
    return all(x <= 0 and y <= 0 for x, y in ordered[: largest - 1])


def evaluate(config: Config, pattern: Config) -> Evaluation:
    """Classify the snapshot and plan the single move for its task."""
    if config.kind != pattern.kind:
        raise ValueError("configuration and pattern live on different grids")
    if config.n != pattern.n:
        raise ValueError("configuration and pattern sizes differ")
    kind = config.kind
    v: dict = {}

    v["pattern_formed"] = symmetry.similar(config, pattern) is not None
    if v["pattern_formed"]:
        return Evaluation(8, v, None)

    guard = refsys.identify_first_guard(config)
    ind = refsys.eval_induced_line(config, guard, pattern)
    v["has_induced_line"] = ind is not None

    v["finisher_aligned"] = refsys.finisher_aligned(config, pattern)
    if v["finisher_aligned"]:
        return Evaluation(7, v, _plan_finish(config, pattern))

    others = config.remove(guard)
    wf = bounding.mbp(pattern).w

    t6 = refsys.t6_data(config, pattern)
    aligned: list[refsys.CompletionBranch] = []
    if t6 is not None:
        aligned = [
            b
            for b in t6.branches
            if refsys.surplus_position(b.sequence, t6.first_dec) == b.guard_pos
            and b.guard_pos < t6.first_pos
        ]
    v["all_but_one_formed"] = bool(aligned)
    sats: list[refsys.CompletionBranch] = []
    if aligned:
        clear: dict = {}
        for b in aligned:
            if b.guard not in clear:
                clear[b.guard] = (
                    _guard_region_clearance(kind, config.remove(b.guard), b.guard)
                    >= 3 * wf
                )
            if clear[b.guard]:
                sats.append(b)
        v["guard_clear_of_pattern"] = bool(sats)
    if sats:
        return Evaluation(6, v, _plan_align_guard(config, t6, sats))

    pre5 = False
    anchor = None
    if ind is not None and others.n >= 2:
        offs = [
            lattice.transverse(kind, ind.axis, p) - ind.line[1]
            for p in others.support()
        ]
        v["others_one_side"] = all(t >= 0 for t in offs) or all(t <= 0 for t in offs)
        if v["others_one_side"]:
            anchor = refsys.rs_anchor(config, pattern)
            v["all_but_two_formed"] = anchor is not None
            if anchor is not None:
                rs5, embed5 = anchor
                delta5 = refsys.compute_delta(rs5, config, pattern)
                v["guard_clear_of_origin"] = (
                    lattice.dist(kind, guard, rs5.origin) >= 3 * delta5
                )
                xp, yp = rs5.to_frame(rs5.second_guard)
                xf, yf = embed5.targets_frame[-1]
                slack = 1 if kind == "hexagonal" else 0
                v["second_guard_on_course"] = xp <= xf + slack and yp >= yf
                pre5 = v["guard_clear_of_origin"] and v["second_guard_on_course"]
    if pre5:
        rs5, embed5 = anchor
        return Evaluation(5, v, _plan_second_descent(config, rs5, embed5))

    pre4 = False
    rs4 = embed4 = None
    if ind is not None and others.n >= 2:
        rs4 = refsys.rs_ranked(config, pattern)
        if rs4 is not None:
            embed4 = refsys.embed_pattern(rs4, pattern)
            delta4 = refsys.compute_delta(rs4, config, pattern)
            d_origin = lattice.dist(kind, guard, rs4.origin)
            v["guard_clear_of_origin"] = d_origin >= 3 * delta4
            xs, ys = rs4.to_frame(rs4.second_guard)
            v["second_guard_placed"] = xs == 0 and 2 * delta4 <= ys < d_origin
            workers4 = others.remove(rs4.second_guard)
            v["workers_in_position"] = _workers_in_position(rs4, embed4, workers4)
            pre4 = (
                v["guard_clear_of_origin"]
                and v["second_guard_placed"]
                and v["workers_in_position"]
            )
    if pre4:
        return Evaluation(4, v, _plan_fill(config, rs4, embed4))

    pre3 = False
    rs3 = delta3 = None
    if ind is not None and others.n >= 2:
        rs3 = refsys.rs_promotion(config, pattern)
        if rs3 is not None:
            v["guard_on_axis"] = rs3.to_frame(guard)[1] == 0
            workers3 = others.remove(rs3.second_guard)
            offs = [
                lattice.transverse(kind, rs3.axis_line[0], p) - rs3.axis_line[1]
                for p in workers3.support()
            ]
            v["workers_one_side"] = all(t >= 0 for t in offs) or all(
                t <= 0 for t in offs
            )
            delta3 = refsys.compute_delta(rs3, config, pattern)
            v["guard_clear_of_origin"] = (
                lattice.dist(kind, guard, rs3.origin) >= 3 * delta3
            )
            rung3 = _guard_orderings(config, rs3, delta3, guard)
            v["guard_rankings_settled"] = rung3 is not None
            pre3 = (
                v["guard_on_axis"]
                and v["workers_one_side"]
                and v["guard_clear_of_origin"]
                and v["guard_rankings_settled"]
            )
    if pre3:
        return Evaluation(3, v, _plan_second_climb(config, rs3, delta3, rung3))

    if ind is not None:
        if rs3 is not None:
            return Evaluation(2, v, _plan_anchor_guard(config, rs3, delta3))
        return Evaluation(2, v, None, note="no promotion branch")

    return Evaluation(1, v, _plan_make_line(config, pattern))


def compute(config: Config, pattern: Config, me: Point) -> Command | None:
    """The command for the robot standing at `me`, or None to stay put."""
    ev = evaluate(config, pattern)
    if ev.command is not None and ev.command.mover == me:
        return ev.command
    return None


def _ring(kind: str, center: Point, r: int):
    ca, cb = center
    for da in range(-r, r + 1):
        for db in range(-r, r + 1):
            p = (ca + da, cb + db)
            if lattice.is_vertex(kind, p) and lattice.dist(kind, center, p) == r:
                yield p


def _plan_make_line(config: Config, pattern: Config) -> Command:
    """Walk the far guard outward until some axis line through it crosses
    every bounding parallelogram of the others, and only one axis does."""
    kind = config.kind
    guard = refsys.identify_first_guard(config)
    others = config.remove(guard)
    if others.n == 0:
        raise DecisionError("lone robot cannot need a line")
    occupied = frozenset(others.support())
    span = lattice.span(kind, config.support())
    cap = 4 * span + 3 * bounding.mbp(pattern).w + 16
    fk = _fk(config)
    for r in range(1, cap + 1):
        for dest in sorted(_ring(kind, guard, r), key=fk):
            if dest in occupied:
                continue
            moved = _with_robot(others, dest)
            dd = sum_of_distances(moved, dest)
            # Strict dominance: ties let a later snapshot crown a different
            # robot, which restarts the whole construction.
            if any(
                sum_of_distances(moved, p) >= dd
                for p in moved.support()
                if p != dest
            ):
                continue
            if refsys.eval_induced_line(moved, dest) is None:
                continue
            if any(
                lattice.is_rotation(m)
                or not symmetry.reflection_axis_contains(m, t, dest)
                for m, t in symmetry.automorphisms(moved)
            ):
                continue
            def route(banned, dest=dest):
                try:
                    return lattice.shortest_path(
                        kind, guard, dest, avoid=occupied | banned, key=fk
                    )
                except ValueError:
                    return None

            try:
                path = _sym_checked(config, guard, route, "blocked", pattern)
            except DecisionError:
                continue
            return Command(guard, dest, path[1], 1)
    raise DecisionError("no line-inducing vertex within search cap")


def _guard_orderings(config: Config, rs: refsys.RefSys, delta: int,
                     guard_pos: Point) -> tuple[int, Point] | None:
    """Lowest rung on the transverse axis where, with the far guard standing at
    guard_pos, the finished placement ranks the guards first and second by
    distance sum with everyone else strictly below. None when no rung between
    twice the clearance unit and the guard's offset achieves that.

    The far guard's margin carries one extra unit off the square and
    triangular grids because the climb may detour one vertex off the axis.
    """
    kind = config.kind
    slack = 1 if kind == "hexagonal" else 0
    workers = config.remove(rs.first_guard).remove(rs.second_guard)
    base = _with_robot(workers, guard_pos)
    occupied = frozenset(workers.support()) | {guard_pos}
    d = abs(rs.to_frame(guard_pos)[0])
    for y in range(max(2 * delta, 1), d):
        vtx = rs.from_frame(0, y)
        if not lattice.is_vertex(kind, vtx) or vtx in occupied:
            continue
        trial = _with_robot(base, vtx)
        dn = sum_of_distances(trial, vtx)
        dg = sum_of_distances(trial, guard_pos)
        if dg <= dn + slack:
            continue
        if all(
            dn > sum_of_distances(trial, w) and dg > sum_of_distances(trial, w) + slack
            for w in workers.support()
        ):
            return y, vtx
    return None


def _plan_anchor_guard(config: Config, rs: refsys.RefSys, delta: int) -> Command:
    """Send the far guard along the agreed axis until it sits well clear of
    the origin on the negative side and far enough out that the partner's
    climb cannot overturn the distance-sum ranking."""
    kind = config.kind
    guard = rs.first_guard
    occupied = frozenset(config.remove(guard).support())
    fk = _fk(config)
    span = lattice.span(kind, config.support())
    cap = 3 * delta + 4 * span + 4 * config.n + 16
    dest = None
    for dd in range(max(3 * delta, 1), cap + 1):
        vtx = rs.from_frame(-dd, 0)
        if not lattice.is_vertex(kind, vtx) or vtx in occupied:
            continue
        if _guard_orderings(config, rs, delta, vtx) is None:
            continue
        dest = vtx
        break
    if dest is None:
        raise DecisionError("no admissible anchor on the axis")
    if guard == dest:
        return Command(guard, dest, dest, 2)
    # Keep the walk inside the rows carrying a witness line, or the axis
    # evaluation flickers off mid-journey.
    axis = rs.axis_line[0]
    t_guard = lattice.transverse(kind, axis, guard)
    t_axis = lattice.transverse(kind, axis, dest)
    lo, hi = min(t_guard, t_axis), max(t_guard, t_axis)
    if lo == hi and kind == "hexagonal":
        t_others = [
            lattice.transverse(kind, axis, p)
            for p in config.remove(guard).support()
        ]
        side = 1 if sum(t_others) >= len(t_others) * t_axis else -1
        lo, hi = min(lo, t_axis - side), max(hi, t_axis - side)

    def allowed(p: Point) -> bool:
        return lo <= lattice.transverse(kind, axis, p) <= hi and p not in occupied

    def route(banned):
        return lattice.restricted_path(
            kind, guard, dest, lambda p: p not in banned and allowed(p), key=fk
        )

    path = _sym_checked(config, guard, route, "anchor walk blocked on the axis band")
    return Command(guard, dest, path[1], 2)


def _plan_second_climb(config: Config, rs: refsys.RefSys, delta: int,
                       rung: tuple[int, Point]) -> Command:
    """Raise the promoted guard up the transverse axis to the agreed rung."""
    kind = config.kind
    mover = rs.second_guard
    occupied = frozenset(config.remove(mover).support())
    fk = _fk(config)
    dest = rung[1]
    if mover == dest:
        return Command(mover, dest, dest, 3)
    if kind == "hexagonal":
        workers = config.remove(rs.first_guard).remove(mover)
        boxes = [_frame_box(fr) for fr in bounding.mbp(workers).frames]
        allowed = lambda p: p not in occupied and not any(b.contains(p) for b in boxes)

        def route(banned):
            path = lattice.restricted_path(
                kind, mover, dest, lambda p: p not in banned and allowed(p), key=fk
            )
            if path is not None:
                return path
            try:
                return lattice.shortest_path(
                    kind, mover, dest, avoid=occupied | banned, key=fk
                )
            except ValueError:
                return None
    else:
        def route(banned):
            try:
                return lattice.shortest_path(
                    kind, mover, dest, avoid=occupied | banned, key=fk
                )
            except ValueError:
                return None

    path = _sym_checked(config, mover, route, "climb path blocked")
    return Command(mover, dest, path[1], 3)


def _plan_fill(config: Config, rs: refsys.RefSys,
               embed: refsys.PatternEmbed) -> Command | None:
    """March the highest unplaced worker to the highest unfilled target."""
    kind = config.kind
    workers = config.remove(rs.first_guard).remove(rs.second_guard)
    largest, ordered = refsys.matched_state(rs, embed, workers)
    if largest is None:
        return None
    mover_f = ordered[largest - 1]
    target_f = embed.targets_frame[largest]
    mover = rs.from_frame(*mover_f)
    dest = rs.from_frame(*target_f)
    if mover == dest:
        raise DecisionError("unfilled target already carries its mover")
    allow = sum(
        1
        for j in range(1, len(embed.targets_frame) - 1)
        if embed.targets_frame[j] == target_f
    )
    avoid = frozenset(p for p in config.support() if p != mover and p != dest)
    fk = _fk(config)
    tx, ty = target_f

    # Confining the walk to the quadrant at or below-left of the target keeps
    # the staircase witness true at every intermediate snapshot.
    def allowed(p):
        x, y = rs.to_frame(p)
        return x <= tx and y <= ty and p not in avoid

    def route(banned):
        return lattice.restricted_path(
            kind, mover, dest, lambda p: p not in banned and allowed(p), key=fk
        )

    path = _sym_checked(config, mover, route, "fill path blocked")
    return Command(mover, dest, path[1], 4, allow)


def _plan_second_descent(config: Config, rs: refsys.RefSys,
                         embed: refsys.PatternEmbed) -> Command | None:
    """Bring the second guard home: hold the row until above its target
    column, then drop straight down."""
    kind = config.kind
    mover = rs.second_guard
    xf, yf = embed.targets_frame[-1]
    x0, y0 = rs.to_frame(mover)
    if (x0, y0) == (xf, yf):
        return None
    dest = rs.from_frame(xf, yf)
    allow = sum(1 for t in embed.targets_frame if t == (xf, yf))
    occupied = frozenset(config.remove(mover).support())
    if kind != "hexagonal":
        if x0 != xf:
            nxt = rs.from_frame(x0 + (1 if xf > x0 else -1), y0)
        else:
            nxt = rs.from_frame(x0, y0 - 1)
        if nxt in occupied and nxt != dest:
            raise DecisionError("descent leg blocked")
        if not _sym_safe(config, mover, nxt):
            raise DecisionError("descent step breaks symmetry")
        return Command(mover, dest, nxt, 5, allow)
    fk = _fk(config)
    frame_x = lambda p: rs.to_frame(p)[0]
    frame_y = lambda p: rs.to_frame(p)[1]
    if x0 in (xf, xf + 1):
        allowed = lambda p: frame_x(p) in (xf, xf + 1) and p not in occupied

        def route(banned):
            return lattice.restricted_path(
                kind, mover, dest, lambda p: p not in banned and allowed(p), key=fk
            )

        path = _sym_checked(config, mover, route, "descent column band blocked")
        return Command(mover, dest, path[1], 5, allow)
    leg_end = None
    for yy in (y0, y0 + 1):
        cand = rs.from_frame(xf, yy)
        if lattice.is_vertex(kind, cand):
            leg_end = cand
            break
    if leg_end is None:
        raise DecisionError("no landing vertex above target column")
    allowed = lambda p: frame_y(p) in (y0, y0 + 1) and p not in occupied

    def route(banned):
        return lattice.restricted_path(
            kind, mover, leg_end, lambda p: p not in banned and allowed(p), key=fk
        )

    path = _sym_checked(config, mover, route, "descent row band blocked")
    return Command(mover, dest, path[1], 5, allow)


def _plan_align_guard(config: Config, t6: refsys.CompletionData,
                      sats: list) -> Command:
    """Climb the far guard up the leading column to the pattern's first
    scan position."""
    kind = config.kind
    fk = _fk(config)
    dest_k = t6.first_pos - 1
    # Full ties survive only when the placed robots mirror each other around
    # the guard; the branches then prescribe mirror-image climbs and a fixed
    # pick stands in for the adversary's choice of local frame.
    ranked = sorted(
        sats,
        key=lambda b: (
            b.sequence,
            b.guard_pos,
            fk(b.guard),
            fk(b.frame.vertex(dest_k, 0)),
            b.guard,
            b.frame.vertex(dest_k, 0),
            b.frame.corner,
            b.frame.dh,
            b.frame.dw,
        ),
    )
    br = ranked[0]
    fr = br.frame
    guard = br.guard
    k, m = fr.coords(guard)
    if m != 0:
        raise DecisionError("guard strayed from the leading column")
    occupied = frozenset(config.remove(guard).support())
    if kind != "hexagonal":
        dest = fr.vertex(dest_k, 0)
        nxt = fr.vertex(k + 1, 0)
        if nxt in occupied:
            raise DecisionError("leading column blocked")
        if not _sym_safe(config, guard, nxt):
            raise DecisionError("alignment step breaks symmetry")
        return Command(guard, dest, nxt, 6)
    dest = None
    for kk in (dest_k, dest_k + 1):
        cand = fr.vertex(kk, 0)
        if lattice.is_vertex(kind, cand):
            dest = cand
            break
    assert dest is not None
    stop = None
    for kk in (k + 1, k + 2):
        cand = fr.vertex(kk, 0)
        if lattice.is_vertex(kind, cand):
            stop = (kk, cand)
            break
    if stop is None:
        raise DecisionError("no vertex above on the leading column")
    k_stop, stop_vtx = stop

    def allowed(p: Point) -> bool:
        kk, mm = fr.coords(p)
        return mm in (0, -1) and k <= kk <= k_stop and p not in occupied

    def route(banned):
        return lattice.restricted_path(
            kind, guard, stop_vtx, lambda p: p not in banned and allowed(p), key=fk
        )

    path = _sym_checked(config, guard, route, "leading column band blocked")
    return Command(guard, dest, path[1], 6)


def _plan_finish(config: Config, pattern: Config) -> Command:
    """Slide the aligned guard along its row into the last empty target."""
    kind = config.kind
    pos, cands = refsys.completion_candidates(config, pattern)
    if not cands:
        raise DecisionError("final approach without a surplus scan")
    fk = _fk(config)
    # Nearest target first keeps the walk on its own side of any mirror the
    # placed robots form; leftover ties are mirror images of each other, so a
    # fixed pick stands in for the adversary's choice of local frame.
    ranked = sorted(
        cands,
        key=lambda c: (
            lattice.dist(kind, c[0], c[1]),
            c[2].sequence,
            c[2].guard_pos,
            fk(c[0]),
            fk(c[1]),
            c[0],
            c[1],
        ),
    )
    mover, dest, br = ranked[0]
    fr = br.frame
    if config.count(mover) == 0:
        raise DecisionError("finisher vertex empty")
    pat_seq, _, first_pos = refsys.pattern_first_data(pattern)
    allow = pat_seq[first_pos - 1]
    occupied = frozenset(p for p in config.support() if p != mover and p != dest)
    if kind != "hexagonal":
        k, m = fr.coords(mover)
        nxt = fr.vertex(k, m + 1)
        if nxt in occupied:
            raise DecisionError("completion row blocked")
        if not _sym_safe(config, mover, nxt, pattern):
            raise DecisionError("completion step breaks symmetry")
        return Command(mover, dest, nxt, 7, allow)
    k_t, _ = fr.coords(dest)
    rows = tuple(r for r in (k_t - 1, k_t, k_t + 1) if r >= 0)
    allowed = lambda p: fr.coords(p)[0] in rows and p not in occupied

    def route(banned):
        return lattice.restricted_path(
            kind, mover, dest, lambda p: p not in banned and allowed(p), key=fk
        )

    path = _sym_checked(config, mover, route, "completion row band blocked", pattern)
    return Command(mover, dest, path[1], 7, allow)
