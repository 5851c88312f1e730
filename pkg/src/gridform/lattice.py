"""Integer geometry for the three regular grids.

Vertices are integer pairs (a, b). The square grid uses the usual axes; the
triangular grid uses axial coordinates whose basis vectors meet at 60 degrees,
so the six neighbor offsets are +-(1,0), +-(0,1), +-(1,-1). The hexagonal grid
is the triangular grid with every vertex satisfying (a - b) % 3 == 0 removed;
what is left is 3-regular. Distances on the hexagonal grid are measured with
the triangular metric (the grids share vertices), while movement is restricted
to hexagonal edges.
"""

from __future__ import annotations

from collections import deque

Point = tuple[int, int]
Matrix = tuple[tuple[int, int], tuple[int, int]]

KINDS = ("square", "triangular", "hexagonal")

SQUARE_STEPS: tuple[Point, ...] = ((1, 0), (0, 1), (-1, 0), (0, -1))
TRI_STEPS: tuple[Point, ...] = ((1, 0), (0, 1), (-1, 1), (-1, 0), (0, -1), (1, -1))

# Representative direction for each family of grid lines, indexed by axis.
AXIS_DIRS = {
    "square": ((1, 0), (0, 1)),
    "triangular": ((1, 0), (0, 1), (1, -1)),
    "hexagonal": ((1, 0), (0, 1), (1, -1)),
}


def check_kind(kind: str) -> None:
    if kind not in KINDS:
        raise ValueError(f"unknown grid kind: {kind!r}")


def is_vertex(kind: str, p: Point) -> bool:
    """Whether p exists on the grid (hexagonal removes one third of vertices)."""
    if kind == "hexagonal":
        return (p[0] - p[1]) % 3 != 0
    return True


def hex_coset(p: Point) -> int:
    return (p[0] - p[1]) % 3


def neighbors(kind: str, p: Point) -> tuple[Point, ...]:
    a, b = p
    if kind == "square":
        return tuple((a + da, b + db) for da, db in SQUARE_STEPS)
    if kind == "triangular":
        return tuple((a + da, b + db) for da, db in TRI_STEPS)
    return tuple(
        (a + da, b + db)
        for da, db in TRI_STEPS
        if (a + da - b - db) % 3 != 0
    )


def tri_dist(da: int, db: int) -> int:
    return (abs(da) + abs(db) + abs(da + db)) // 2


def dist(kind: str, p: Point, q: Point) -> int:
    """Grid distance; hexagonal uses the ambient triangular metric."""
    da, db = q[0] - p[0], q[1] - p[1]
    if kind == "square":
        return abs(da) + abs(db)
    return tri_dist(da, db)


def hex_edge_dist(p: Point, q: Point) -> int:
    """Length of a shortest walk using hexagonal edges only."""
    if p == q:
        return 0
    seen = {p}
    frontier = deque(((p, 0),))
    while frontier:
        v, d = frontier.popleft()
        for w in neighbors("hexagonal", v):
            if w == q:
                return d + 1
            if w not in seen:
                seen.add(w)
                frontier.append((w, d + 1))
    raise RuntimeError("unreachable")


def shortest_path(
    kind: str,
    src: Point,
    dst: Point,
    avoid: frozenset[Point] | set[Point] = frozenset(),
    key=None,
) -> tuple[Point, ...]:
    """A shortest path src..dst along grid edges, skipping `avoid` vertices.

    Ties are broken by `key` (default: lexicographic coordinates), applied to
    each candidate next vertex while walking distance-down from src. Raises
    ValueError when every shortest corridor is blocked.
    """
    if src == dst:
        return (src,)
    if key is None:
        key = lambda v: v
    # BFS from dst gives exact remaining distances despite blocked vertices.
    depth = {dst: 0}
    frontier = deque((dst,))
    found = False
    while frontier and not found:
        v = frontier.popleft()
        for w in neighbors(kind, v):
            if w in depth or (w in avoid and w != src):
                continue
            depth[w] = depth[v] + 1
            if w == src:
                found = True
            frontier.append(w)
    if src not in depth:
        raise ValueError("no unblocked path")
    path = [src]
    v = src
    while v != dst:
        v = min(
            (w for w in neighbors(kind, v) if depth.get(w) == depth[v] - 1),
            key=key,
        )
        path.append(v)
    return tuple(path)


def restricted_path(
    kind: str,
    src: Point,
    dst: Point,
    allowed,
    key=None,
    cap: int = 250000,
) -> tuple[Point, ...] | None:
    """Shortest path src..dst visiting only vertices with allowed(v) true
    (endpoints always allowed). None when unreachable within `cap` visits."""
    if src == dst:
        return (src,)
    if key is None:
        key = lambda v: v
    depth = {dst: 0}
    frontier = deque((dst,))
    found = False
    visited = 0
    while frontier and not found:
        v = frontier.popleft()
        for w in neighbors(kind, v):
            if w in depth or (w != src and not allowed(w)):
                continue
            depth[w] = depth[v] + 1
            visited += 1
            if visited > cap:
                return None
            if w == src:
                found = True
                break
            frontier.append(w)
    if src not in depth:
        return None
    path = [src]
    v = src
    while v != dst:
        down = [w for w in neighbors(kind, v) if depth.get(w) == depth[v] - 1]
        if not down:
            return None
        v = min(down, key=key)
        path.append(v)
    return tuple(path)


def axis_of(kind: str, d: Point) -> tuple[int, int]:
    """(axis index, sign) of a direction vector parallel to a grid axis."""
    for i, (da, db) in enumerate(AXIS_DIRS[kind]):
        if d[0] * db == d[1] * da:
            if d == (0, 0):
                raise ValueError("zero direction")
            sign = 1 if (d[0] * da + d[1] * db) > 0 else -1
            return i, sign
    raise ValueError(f"{d} is not parallel to a {kind} axis")


def transverse(kind: str, axis: int, p: Point) -> int:
    """Linear form constant on lines of the given axis family.

    Its increment between adjacent parallel lines is 1, so differences measure
    point-to-line distances in the grid metric.
    """
    a, b = p
    if kind == "square":
        return (b, a)[axis]
    return (b, a, a + b)[axis]


def along(kind: str, axis: int, p: Point) -> int:
    """Position of p along a line of the given axis family."""
    a, b = p
    if kind == "square":
        return (a, b)[axis]
    # Complementary form: constant steps of 1 along the axis direction.
    return (a, b, a)[axis]


Line = tuple[int, int]  # (axis index, transverse level)


def line_through(kind: str, p: Point, d: Point) -> Line:
    axis, _ = axis_of(kind, d)
    return (axis, transverse(kind, axis, p))


def on_line(kind: str, line: Line, p: Point) -> bool:
    return transverse(kind, line[0], p) == line[1]


def line_point(kind: str, line: Line, position: int) -> Point:
    """The vertex of `line` whose along-coordinate equals `position`."""
    axis, level = line
    if kind == "square":
        return (position, level) if axis == 0 else (level, position)
    if axis == 0:
        return (position, level)
    if axis == 1:
        return (level, position)
    return (position, level - position)


def line_dist(kind: str, line: Line, p: Point) -> int:
    return abs(transverse(kind, line[0], p) - line[1])


def side_of_line(kind: str, line: Line, p: Point) -> int:
    d = transverse(kind, line[0], p) - line[1]
    return (d > 0) - (d < 0)


def cross(v: Point, w: Point) -> int:
    return v[0] * w[1] - v[1] * w[0]


def dot2(kind: str, v: Point, w: Point) -> int:
    """Doubled Euclidean inner product in lattice coordinates (stays integral)."""
    if kind == "square":
        return 2 * (v[0] * w[0] + v[1] * w[1])
    return 2 * v[0] * w[0] + 2 * v[1] * w[1] + v[0] * w[1] + v[1] * w[0]


def canonical_corner(kind: str, d1: Point, d2: Point) -> bool:
    """Whether two unit side directions span the corner angle used by scans."""
    if kind == "square":
        return dot2(kind, d1, d2) == 0
    return dot2(kind, d1, d2) == 1


def vertex_type(p: Point, d: Point) -> int:
    """Hexagonal vertex class along an oriented direction: 0 removed, 1 if the
    forward edge exists, 2 otherwise."""
    if not is_vertex("hexagonal", p):
        return 0
    return 1 if is_vertex("hexagonal", (p[0] + d[0], p[1] + d[1])) else 2


def mat_vec(m: Matrix, p: Point) -> Point:
    return (m[0][0] * p[0] + m[0][1] * p[1], m[1][0] * p[0] + m[1][1] * p[1])


def mat_mul(m: Matrix, n: Matrix) -> Matrix:
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


IDENTITY: Matrix = ((1, 0), (0, 1))
ROT60: Matrix = ((0, -1), (1, 1))
ROT90: Matrix = ((0, -1), (1, 0))
REFL_TRI: Matrix = ((1, 1), (0, -1))  # fixes the (1,0) axis
REFL_SQ: Matrix = ((1, 0), (0, -1))


def point_group(kind: str) -> tuple[Matrix, ...]:
    """All grid isometry matrices fixing the origin, identity first."""
    if kind == "square":
        rot, refl, order = ROT90, REFL_SQ, 4
    else:
        rot, refl, order = ROT60, REFL_TRI, 6
    out = []
    m = IDENTITY
    for _ in range(order):
        out.append(m)
        m = mat_mul(rot, m)
    for r in list(out):
        out.append(mat_mul(r, refl))
    return tuple(out)


def is_rotation(m: Matrix) -> bool:
    return m[0][0] * m[1][1] - m[0][1] * m[1][0] == 1


def rotation_order(kind: str, m: Matrix) -> int:
    k = 1
    acc = m
    while acc != IDENTITY:
        acc = mat_mul(acc, m)
        k += 1
        if k > 12:
            raise ValueError("not a finite rotation")
    return k


def coset_shift_preserves_hex(t: Point) -> bool:
    """A grid map with translation part t keeps the hexagonal vertex set iff
    this holds (the removed coset must map onto itself)."""
    return (t[0] - t[1]) % 3 == 0


def solve_frame(dx: Point, dy: Point, v: Point) -> tuple[int, int] | None:
    """Integer (x, y) with v == x*dx + y*dy, or None if the basis is singular
    or the solution is fractional."""
    det = cross(dx, dy)
    if det == 0:
        return None
    xn = v[0] * dy[1] - v[1] * dy[0]
    yn = dx[0] * v[1] - dx[1] * v[0]
    if xn % det or yn % det:
        return None
    return (xn // det, yn // det)


def line_intersection(kind: str, l1: Line, l2: Line) -> Point | None:
    """The common vertex of two non-parallel grid lines (None when parallel
    or the crossing is not a lattice point)."""
    if l1[0] == l2[0]:
        return None
    rows = []
    for axis, level in (l1, l2):
        if kind == "square":
            rows.append(((0, 1) if axis == 0 else (1, 0), level))
        else:
            rows.append(([(0, 1), (1, 0), (1, 1)][axis], level))
    (r0, c0), (r1, c1) = rows
    det = r0[0] * r1[1] - r0[1] * r1[0]
    an = c0 * r1[1] - r0[1] * c1
    bn = r0[0] * c1 - c0 * r1[0]
    if an % det or bn % det:
        return None
    return (an // det, bn // det)


def span(kind: str, pts) -> int:
    """Largest extent of a point set across the grid's axis families."""
    pts = list(pts)
    if not pts:
        return 0
    best = 0
    axes = len(AXIS_DIRS[kind])
    for axis in range(axes):
        vals = [transverse(kind, axis, p) for p in pts]
        best = max(best, max(vals) - min(vals))
    return best
