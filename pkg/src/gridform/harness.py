"""Adversarial scheduler harness with runtime monitors.

Drives the decision rule under four activation models, from lock-step rounds
to a fully event-based adversary, while watching the run for the invariants
the rule promises: no unsanctioned multiplicity, no unsanctioned symmetry,
task numbers that never regress along snapshot order, a single mover per
configuration, and progress within a computable stall bound. Every event can
be written to a JSON-lines trace that is byte-identical across repeat runs
with the same seed.
"""

from __future__ import annotations

import bisect
import json
from dataclasses import dataclass
from random import Random

from . import bounding, decision, lattice, refsys, symmetry
from .config import Config, apply_move

SCHEDULERS = ("fsync", "ssync", "sasync", "async")

EXIT_FORMED = 0
EXIT_MONITOR = 2
EXIT_BUDGET = 3

QUIESCENT_FACTOR = 100  # nil-only events per robot before success is declared


class MonitorError(RuntimeError):
    def __init__(self, name: str, detail: str):
        super().__init__(f"{name}: {detail}")
        self.name = name
        self.detail = detail


@dataclass
class SimResult:
    exit_code: int
    events: int
    formed: bool
    violation: str | None
    final: Config
    trace: str | None


class _World:
    def __init__(self, config: Config, pattern: Config, seed: int,
                 scheduler: str, budget: int, collect: bool, sink):
        self.config = config
        self.pattern = pattern
        self.kind = config.kind
        self.n = config.n
        self.rng = Random(seed)
        self.budget = budget
        self.pos = list(config.points())
        self.phase = [0] * self.n           # 0 idle, 1 looked, 2 computed
        self.snap: list[Config | None] = [None] * self.n
        self.snap_at = [0] * self.n
        self.cmd: list[decision.Command | None] = [None] * self.n
        self.last_move = [0] * self.n
        self.events = 0
        self.quiet = 0
        self.h2: list[tuple[int, int]] = []  # (look index, task), task-monotone
        self.cache: dict[Config, decision.Evaluation] = {}
        self.lines: list[str] | None = [] if collect else None
        self.sink = sink
        self.violation: str | None = None
        span = lattice.span(self.kind, config.support())
        pspan = lattice.span(self.kind, pattern.support())
        wf = bounding.mbp(pattern).w
        self.stall_bound = 16 * self.n * (span + pspan + 3 * wf + 8)
        self._formed_for: Config | None = None
        self._formed_val = False

    def emit(self, obj: dict) -> None:
        if self.lines is None and self.sink is None:
            return
        line = json.dumps(obj, separators=(",", ":"))
        if self.lines is not None:
            self.lines.append(line)
        if self.sink is not None:
            self.sink.write(line + "\n")

    def formed(self) -> bool:
        if self._formed_for is not self.config:
            self._formed_for = self.config
            self._formed_val = symmetry.similar(self.config, self.pattern) is not None
        return self._formed_val


def _look(w: _World, rid: int) -> None:
    w.events += 1
    w.quiet += 1
    w.snap[rid] = w.config
    w.snap_at[rid] = w.events
    w.phase[rid] = 1
    w.emit({"ev": "look", "i": w.events, "rid": rid})


def _evaluate(w: _World, snap: Config) -> decision.Evaluation:
    ev = w.cache.get(snap)
    if ev is None:
        try:
            ev = decision.evaluate(snap, w.pattern)
        except decision.DecisionError as exc:
            raise MonitorError("decision-error", str(exc)) from exc
        w.cache[snap] = ev
    return ev


def _h2_insert(w: _World, lidx: int, task: int) -> None:
    i = bisect.bisect(w.h2, (lidx, task))
    if i > 0 and w.h2[i - 1][1] > task:
        raise MonitorError(
            "task-regression",
            f"task {task} after task {w.h2[i - 1][1]} in snapshot order",
        )
    if i < len(w.h2) and w.h2[i][1] < task:
        raise MonitorError(
            "task-regression",
            f"task {w.h2[i][1]} after task {task} in snapshot order",
        )
    w.h2.insert(i, (lidx, task))


def _compute(w: _World, rid: int) -> None:
    w.events += 1
    w.quiet += 1
    snap = w.snap[rid]
    assert snap is not None
    ev = _evaluate(w, snap)
    if ev.command is not None and snap.count(ev.command.mover) > 1:
        raise MonitorError(
            "mover-multiplicity",
            f"mover {ev.command.mover} carries {snap.count(ev.command.mover)} robots",
        )
    cmd = ev.command if ev.command is not None and ev.command.mover == w.pos[rid] else None
    w.cmd[rid] = cmd
    w.phase[rid] = 2
    if cmd is not None:
        for j in range(w.n):
            if j != rid and w.cmd[j] is not None:
                raise MonitorError(
                    "one-mover", f"robots {j} and {rid} both hold move commands"
                )
    _h2_insert(w, w.snap_at[rid], ev.task)
    w.emit(
        {
            "ev": "compute",
            "i": w.events,
            "rid": rid,
            "task": ev.task,
            "mover": list(cmd.mover) if cmd else None,
            "step": list(cmd.step) if cmd else None,
        }
    )


def _collinear(config: Config) -> bool:
    pts = config.support()
    for axis in range(len(lattice.AXIS_DIRS[config.kind])):
        vals = {lattice.transverse(config.kind, axis, p) for p in pts}
        if len(vals) == 1:
            return True
    return False


def _check_symmetry(w: _World, pre: Config, dest) -> None:
    autos = symmetry.automorphisms(w.config)
    if not autos:
        return
    if symmetry.similar(w.config, w.pattern) is not None:
        return
    if _collinear(w.config):
        return
    hint = None
    ind = refsys.eval_induced_line(pre)
    if ind is not None:
        hint = lattice.AXIS_DIRS[w.kind][ind.axis]
    for m, t in autos:
        info = symmetry.classify(w.kind, m, t)
        if info["type"] != "reflection":
            raise MonitorError("symmetry", f'unsanctioned {info["type"]}')
        if symmetry.reflection_axis_contains(m, t, dest):
            continue
        if hint is not None:
            ax = tuple(info["axis_direction"])
            if ax == hint or ax == (-hint[0], -hint[1]):
                continue
        raise MonitorError("symmetry", "reflection off the mover and the axis")


def _move(w: _World, rid: int) -> None:
    w.events += 1
    cmd = w.cmd[rid]
    w.cmd[rid] = None
    w.phase[rid] = 0
    w.last_move[rid] = w.events
    src = w.pos[rid]
    if cmd is None or cmd.step == src:
        w.quiet += 1
        w.emit({"ev": "move", "i": w.events, "rid": rid,
                "from": list(src), "to": list(src), "hash": w.config.hash_hex()})
        return
    pre = w.config
    try:
        w.config = apply_move(pre, src, cmd.step)
    except ValueError as exc:
        raise MonitorError("invalid-step", str(exc))
    w.pos[rid] = cmd.step
    w.quiet = 0
    lam = w.config.count(cmd.step)
    if lam >= 2 and cmd.allow_count < lam:
        raise MonitorError(
            "multiplicity",
            f"{lam} robots on {cmd.step} with sanction {cmd.allow_count}",
        )
    _check_symmetry(w, pre, cmd.step)
    w.emit({"ev": "move", "i": w.events, "rid": rid,
            "from": list(src), "to": list(cmd.step), "hash": w.config.hash_hex()})


def _halt(w: _World) -> bool:
    if w.events >= w.budget:
        return True
    if w.quiet >= QUIESCENT_FACTOR * w.n and w.formed():
        return True
    if w.quiet >= w.stall_bound and not w.formed():
        raise MonitorError("stall", f"no progress for {w.quiet} events")
    return False


def _run_fsync(w: _World) -> None:
    while True:
        for fn in (_look, _compute, _move):
            for rid in range(w.n):
                fn(w, rid)
                if _halt(w):
                    return


def _run_ssync(w: _World) -> None:
    while True:
        chosen = [r for r in range(w.n) if w.rng.random() < 0.5]
        if not chosen:
            chosen = [w.rng.randrange(w.n)]
        for fn in (_look, _compute, _move):
            for rid in chosen:
                fn(w, rid)
                if _halt(w):
                    return


def _run_sasync(w: _World) -> None:
    offs = [w.rng.randrange(4) for _ in range(w.n)]
    t = 0
    while True:
        t += 1
        for rid in range(w.n):
            if t % 4 == (offs[rid] + 3) % 4 and w.phase[rid] == 2:
                _move(w, rid)
                if _halt(w):
                    return
        for rid in range(w.n):
            if t % 4 == (offs[rid] + 2) % 4 and w.phase[rid] == 1:
                _compute(w, rid)
                if _halt(w):
                    return
        for rid in range(w.n):
            if t % 4 == (offs[rid] + 1) % 4 and w.phase[rid] == 0:
                _look(w, rid)
                if _halt(w):
                    return


def _run_async(w: _World) -> None:
    """Free per-event choice, except that every robot must finish a full
    cycle inside each tumbling window of 3n events; when the remaining
    events only just cover the outstanding cycle debt, the choice is forced
    to the robot that has waited longest."""
    window = 3 * w.n
    moved = [False] * w.n
    used = 0
    while True:
        remaining = window - used
        needs = sum(3 - w.phase[r] for r in range(w.n) if not moved[r])
        if remaining - needs <= 0:
            waiting = [r for r in range(w.n) if not moved[r]]
            rid = min(waiting, key=lambda r: (-(w.events - w.last_move[r]), r))
        else:
            rid = w.rng.randrange(w.n)
        if w.phase[rid] == 0:
            _look(w, rid)
        elif w.phase[rid] == 1:
            _compute(w, rid)
        else:
            _move(w, rid)
            moved[rid] = True
        used += 1
        if used == window:
            used = 0
            moved = [False] * w.n
        if _halt(w):
            return


_RUNNERS = {
    "fsync": _run_fsync,
    "ssync": _run_ssync,
    "sasync": _run_sasync,
    "async": _run_async,
}


def simulate(config: Config, pattern: Config, scheduler: str = "async",
             seed: int = 0, budget: int = 10**6, collect_trace: bool = False,
             sink=None) -> SimResult:
    """Run one formation attempt to quiescence, violation, or budget."""
    if scheduler not in _RUNNERS:
        raise ValueError(f"unknown scheduler {scheduler!r}")
    if config.kind != pattern.kind:
        raise ValueError("configuration and pattern live on different grids")
    if config.n != pattern.n:
        raise ValueError("configuration and pattern sizes differ")
    w = _World(config, pattern, seed, scheduler, budget, collect_trace, sink)
    w.emit({"ev": "start", "grid": w.kind, "n": w.n, "scheduler": scheduler,
            "seed": seed, "budget": budget, "hash": config.hash_hex()})
    try:
        _RUNNERS[scheduler](w)
    except MonitorError as exc:
        w.violation = f"{exc.name}: {exc.detail}"
        w.emit({"ev": "monitor", "i": w.events, "name": exc.name,
                "detail": exc.detail})
    except decision.DecisionError as exc:
        w.violation = f"decision: {exc}"
        w.emit({"ev": "monitor", "i": w.events, "name": "decision",
                "detail": str(exc)})
    if w.violation is not None:
        code = EXIT_MONITOR
    elif w.formed() and w.quiet >= QUIESCENT_FACTOR * w.n:
        code = EXIT_FORMED
    else:
        code = EXIT_BUDGET
    w.emit({"ev": "end", "exit": code, "events": w.events,
            "formed": w.formed(), "hash": w.config.hash_hex()})
    trace = None
    if w.lines is not None:
        trace = "\n".join(w.lines) + "\n"
    return SimResult(code, w.events, w.formed(), w.violation, w.config, trace)
