"""Grid isometries of configurations: automorphisms and pattern similarity."""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from . import lattice
from .config import Config
from .lattice import Matrix, Point

Transform = tuple[Matrix, Point]


def _maps_onto(config: Config, target: Config, m: Matrix, t: Point) -> bool:
    for p, c in config.cells:
        q = lattice.mat_vec(m, p)
        if target.count((q[0] + t[0], q[1] + t[1])) != c:
            return False
    return True


@lru_cache(maxsize=8192)
def automorphisms(config: Config) -> tuple[Transform, ...]:
    """Non-identity grid isometries fixing the multiset.

    Any such isometry fixes the centroid, so for each point-group matrix there
    is exactly one candidate translation; it must be integral (and must keep
    the hexagonal vertex set, i.e. preserve the removed coset).
    """
    n = config.n
    sx = sum(c * p[0] for p, c in config.cells)
    sy = sum(c * p[1] for p, c in config.cells)
    out = []
    for m in lattice.point_group(config.kind)[1:]:
        mx, my = lattice.mat_vec(m, (sx, sy))
        if (sx - mx) % n or (sy - my) % n:
            continue
        t = ((sx - mx) // n, (sy - my) // n)
        if config.kind == "hexagonal" and not lattice.coset_shift_preserves_hex(t):
            continue
        if _maps_onto(config, config, m, t):
            out.append((m, t))
    return tuple(out)


def is_symmetric(config: Config) -> bool:
    return bool(automorphisms(config))


def similar(config: Config, pattern: Config) -> Transform | None:
    """A grid isometry carrying the configuration onto the pattern, if any.

    Enumerates, per point-group matrix, the translations sending a fixed
    occupied anchor onto each pattern vertex; complete because a matching map
    must send the anchor somewhere occupied.
    """
    if config.kind != pattern.kind or config.n != pattern.n:
        return None
    anchor = config.support()[0]
    for m in lattice.point_group(config.kind):
        ma = lattice.mat_vec(m, anchor)
        for q, _ in pattern.cells:
            t = (q[0] - ma[0], q[1] - ma[1])
            if config.kind == "hexagonal" and not lattice.coset_shift_preserves_hex(t):
                continue
            if _maps_onto(config, pattern, m, t):
                return (m, t)
    return None


def _rotation_angle(kind: str, m: Matrix) -> int:
    step = 90 if kind == "square" else 60
    base = lattice.ROT90 if kind == "square" else lattice.ROT60
    acc = lattice.IDENTITY
    for k in range(0, 360 // step):
        if acc == m:
            return k * step
        acc = lattice.mat_mul(base, acc)
    raise ValueError("not a rotation of this grid")


def _reflection_axis_dir(m: Matrix) -> Point:
    # Kernel of (M - I); reflections of both point groups have integer axes.
    r00, r01 = m[0][0] - 1, m[0][1]
    if r00 or r01:
        e = (-r01, r00)
    else:
        e = (1 - m[1][1], m[1][0])
    assert e != (0, 0)
    from math import gcd

    g = gcd(abs(e[0]), abs(e[1]))
    e = (e[0] // g, e[1] // g)
    if e[0] < 0 or (e[0] == 0 and e[1] < 0):
        e = (-e[0], -e[1])
    return e


def classify(kind: str, m: Matrix, t: Point) -> dict:
    """Human-readable description of an isometry, exact rational geometry."""
    if m == lattice.IDENTITY:
        if t == (0, 0):
            return {"type": "identity"}
        return {"type": "translation", "shift": list(t)}
    if lattice.is_rotation(m):
        angle = _rotation_angle(kind, m)
        # Fixed point of x -> Mx + t.
        a, b = 1 - m[0][0], -m[0][1]
        c, d = -m[1][0], 1 - m[1][1]
        det = a * d - b * c
        cx = Fraction(t[0] * d - b * t[1], det)
        cy = Fraction(a * t[1] - t[0] * c, det)
        return {
            "type": "rotation",
            "angle": angle,
            "center": [[cx.numerator, cx.denominator], [cy.numerator, cy.denominator]],
        }
    mt = lattice.mat_vec(m, t)
    axis = _reflection_axis_dir(m)
    if (t[0] + mt[0], t[1] + mt[1]) != (0, 0):
        return {"type": "glide_reflection", "axis_direction": list(axis), "shift": list(t)}
    px, py = Fraction(t[0], 2), Fraction(t[1], 2)
    return {
        "type": "reflection",
        "axis_point": [[px.numerator, px.denominator], [py.numerator, py.denominator]],
        "axis_direction": list(axis),
    }


def reflection_axis_contains(m: Matrix, t: Point, p: Point) -> bool:
    """Whether vertex p is fixed by the reflection x -> Mx + t."""
    q = lattice.mat_vec(m, p)
    return (q[0] + t[0], q[1] + t[1]) == p
