"""Robot configurations and target patterns as vertex multisets."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass

from . import lattice
from .lattice import Point


@dataclass(frozen=True)
class Config:
    """A multiset of grid vertices: sorted ((a, b), count) pairs plus the grid kind.

    Used both for robot configurations (counts are multiplicities) and for
    target patterns (counts are how many robots the vertex must end up with).
    """

    kind: str
    cells: tuple[tuple[Point, int], ...]

    @staticmethod
    def from_points(kind: str, points) -> "Config":
        lattice.check_kind(kind)
        counts: dict[Point, int] = {}
        for p in points:
            p = (int(p[0]), int(p[1]))
            if not lattice.is_vertex(kind, p):
                raise ValueError(f"{p} is not a {kind} vertex")
            counts[p] = counts.get(p, 0) + 1
        return Config(kind, tuple(sorted(counts.items())))

    @staticmethod
    def from_counts(kind: str, items) -> "Config":
        lattice.check_kind(kind)
        if hasattr(items, "items"):
            items = items.items()
        counts: dict[Point, int] = {}
        for p, c in items:
            p = (int(p[0]), int(p[1]))
            c = int(c)
            if c <= 0:
                raise ValueError(f"count for {p} must be positive")
            if not lattice.is_vertex(kind, p):
                raise ValueError(f"{p} is not a {kind} vertex")
            counts[p] = counts.get(p, 0) + c
        return Config(kind, tuple(sorted(counts.items())))

    @property
    def n(self) -> int:
        return sum(c for _, c in self.cells)

    def support(self) -> tuple[Point, ...]:
        return tuple(p for p, _ in self.cells)

    def count(self, p: Point) -> int:
        for q, c in self.cells:
            if q == p:
                return c
        return 0

    def points(self) -> tuple[Point, ...]:
        out = []
        for p, c in self.cells:
            out.extend([p] * c)
        return tuple(out)

    def as_dict(self) -> dict[Point, int]:
        return dict(self.cells)

    def remove(self, p: Point) -> "Config":
        """One robot fewer at p."""
        d = self.as_dict()
        if p not in d:
            raise ValueError(f"no robot at {p}")
        d[p] -= 1
        if d[p] == 0:
            del d[p]
        return Config(self.kind, tuple(sorted(d.items())))

    def canonical_key(self) -> tuple:
        return (self.kind, self.cells)

    def hash_hex(self) -> str:
        payload = repr(self.canonical_key()).encode()
        return hashlib.blake2b(payload, digest_size=8).hexdigest()


def sum_of_distances(config: Config, p: Point) -> int:
    """Total grid distance from p to every robot (multiplicities counted)."""
    return sum(c * lattice.dist(config.kind, p, q) for q, c in config.cells)


def apply_move(config: Config, src: Point, dst: Point) -> Config:
    """One robot takes a single edge step; no-op moves are allowed."""
    if src == dst:
        return config
    if dst not in lattice.neighbors(config.kind, src):
        raise ValueError(f"{src} -> {dst} is not a grid edge")
    d = config.as_dict()
    if src not in d:
        raise ValueError(f"no robot at {src}")
    d[src] -= 1
    if d[src] == 0:
        del d[src]
    d[dst] = d.get(dst, 0) + 1
    return Config(config.kind, tuple(sorted(d.items())))


def is_initial(config: Config) -> bool:
    """Valid starting point: every vertex holds at most one robot and the
    configuration has no nontrivial symmetry."""
    from . import symmetry

    if any(c != 1 for _, c in config.cells):
        return False
    return not symmetry.is_symmetric(config)


def load_config(text: str) -> Config:
    """Parse {"grid": kind, "robots": [[a, b], ...]}."""
    data = json.loads(text)
    if not isinstance(data, dict) or "grid" not in data or "robots" not in data:
        raise ValueError('config JSON needs "grid" and "robots"')
    robots = data["robots"]
    if not isinstance(robots, list) or not robots:
        raise ValueError('"robots" must be a nonempty list')
    pts = []
    for item in robots:
        if not (isinstance(item, list) and len(item) == 2):
            raise ValueError(f"bad robot entry: {item!r}")
        pts.append((item[0], item[1]))
    return Config.from_points(data["grid"], pts)


def load_pattern(text: str, kind: str) -> Config:
    """Parse {"pattern": [[a, b, count], ...]} (an optional "grid" must agree)."""
    data = json.loads(text)
    if not isinstance(data, dict) or "pattern" not in data:
        raise ValueError('pattern JSON needs "pattern"')
    if "grid" in data and data["grid"] != kind:
        raise ValueError(f'pattern grid {data["grid"]!r} does not match {kind!r}')
    entries = data["pattern"]
    if not isinstance(entries, list) or not entries:
        raise ValueError('"pattern" must be a nonempty list')
    items = []
    for item in entries:
        if not (isinstance(item, list) and len(item) == 3):
            raise ValueError(f"bad pattern entry: {item!r}")
        items.append(((item[0], item[1]), item[2]))
    return Config.from_counts(kind, items)


def dump_config(config: Config) -> str:
    robots = [list(p) for p in config.points()]
    return json.dumps({"grid": config.kind, "robots": robots})


def dump_pattern(pattern: Config) -> str:
    cells = [[p[0], p[1], c] for p, c in pattern.cells]
    return json.dumps({"grid": pattern.kind, "pattern": cells})
