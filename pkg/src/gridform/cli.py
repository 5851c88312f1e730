"""Command line front end.

Subcommands: run a formation attempt under a chosen scheduler, generate
random inputs, analyze a configuration (scans, symmetry, frames, task), draw
SVG snapshots, and fuzz many seeded runs into a TSV report.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from random import Random

from . import bounding, config as cfg, decision, harness, lattice, refsys, symmetry


def _read(path: str) -> str:
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _load_config(path: str) -> cfg.Config:
    return cfg.load_config(_read(path))


def _load_pattern(path: str, kind: str) -> cfg.Config:
    return cfg.load_pattern(_read(path), kind)


def cmd_run(args) -> int:
    configuration = _load_config(args.config)
    pattern = _load_pattern(args.pattern, configuration.kind)
    if not cfg.is_initial(configuration):
        raise ValueError("initial configuration must be plain and asymmetric")
    sink = None
    if args.trace:
        sink = open(args.trace, "w", encoding="utf-8")
    try:
        result = harness.simulate(
            configuration,
            pattern,
            scheduler=args.scheduler,
            seed=args.seed,
            budget=args.budget,
            collect_trace=args.report is not None,
            sink=sink,
        )
    finally:
        if sink is not None:
            sink.close()
    if args.report is not None:
        _write_report(args.report, configuration, pattern, result)
    status = "formed" if result.formed else (result.violation or "budget exhausted")
    print(f"{status} after {result.events} events (exit {result.exit_code})")
    return result.exit_code


def _write_report(outdir: str, configuration: cfg.Config, pattern: cfg.Config,
                  result) -> None:
    from . import render

    os.makedirs(outdir, exist_ok=True)
    frames = [("initial", configuration)]
    current = configuration
    moves = []
    for line in (result.trace or "").splitlines():
        evt = json.loads(line)
        if evt.get("ev") != "move" or evt["from"] == evt["to"]:
            continue
        current = cfg.apply_move(current, tuple(evt["from"]), tuple(evt["to"]))
        moves.append(evt)
        frames.append((f"move {len(moves)}", current))
    digits = max(4, len(str(len(frames))))
    for idx, (note, shot) in enumerate(frames):
        render.render_config(
            shot,
            os.path.join(outdir, f"frame_{idx:0{digits}d}.svg"),
            pattern=pattern,
            note=note,
        )
    with open(os.path.join(outdir, "moves.tsv"), "w", encoding="utf-8") as fh:
        fh.write("index\tevent\trid\tfrom_a\tfrom_b\tto_a\tto_b\thash\n")
        for idx, evt in enumerate(moves, 1):
            fh.write(
                f"{idx}\t{evt['i']}\t{evt['rid']}\t{evt['from'][0]}\t"
                f"{evt['from'][1]}\t{evt['to'][0]}\t{evt['to'][1]}\t{evt['hash']}\n"
            )


def _sample_config(kind: str, n: int, rng: Random) -> cfg.Config:
    side = max(4, int((3 * n) ** 0.5) + 2)
    while True:
        pts = set()
        while len(pts) < n:
            p = (rng.randrange(side), rng.randrange(side))
            if lattice.is_vertex(kind, p):
                pts.add(p)
        candidate = cfg.Config.from_points(kind, pts)
        if cfg.is_initial(candidate):
            return candidate


def _sample_pattern(kind: str, n: int, rng: Random) -> cfg.Config:
    side = max(4, int((2 * n) ** 0.5) + 2)
    items: dict = {}
    placed = 0
    while placed < n:
        p = (rng.randrange(side), rng.randrange(side))
        if not lattice.is_vertex(kind, p):
            continue
        if p in items and rng.random() < 0.7:
            continue
        items[p] = items.get(p, 0) + 1
        placed += 1
    return cfg.Config.from_counts(kind, items)


def cmd_gen(args) -> int:
    rng = Random(args.seed)
    if args.pattern:
        out = cfg.dump_pattern(_sample_pattern(args.grid, args.n, rng))
    else:
        out = cfg.dump_config(_sample_config(args.grid, args.n, rng))
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    return 0


def _mbp_payload(configuration: cfg.Config, with_frames: bool) -> dict:
    res = bounding.mbp(configuration)
    lead = res.leading
    payload = {
        "h": res.h,
        "w": res.w,
        "lss": list(res.sequence),
        "leading_corner": list(lead.corner),
        "leading_direction": list(lead.dh),
    }
    if with_frames:
        payload["frames"] = [
            {
                "corner": list(f.corner),
                "dh": list(f.dh),
                "dw": list(f.dw),
                "h": f.h,
                "w": f.w,
            }
            for f in res.frames
        ]
    return payload


def _refsys_payload(configuration: cfg.Config, pattern: cfg.Config) -> dict:
    ev = decision.evaluate(configuration, pattern)
    guard = refsys.identify_first_guard(configuration)
    ind = refsys.eval_induced_line(configuration)
    rs = None
    if ev.task == 5:
        hit = refsys.rs_anchor(configuration, pattern)
        rs = hit[0] if hit else None
    elif ev.task == 4:
        rs = refsys.rs_ranked(configuration, pattern)
    elif ev.task in (2, 3):
        rs = refsys.rs_promotion(configuration, pattern)
    payload = {
        "task": ev.task,
        "first_guard": list(guard),
        "induced_axis": None if ind is None else ind.axis,
        "induced_level": None if ind is None else ind.line[1],
        "origin": None,
        "dx": None,
        "dy": None,
        "second_guard": None,
    }
    if rs is not None:
        payload["origin"] = list(rs.origin)
        payload["dx"] = list(rs.dx)
        payload["dy"] = list(rs.dy)
        if rs.second_guard is not None:
            payload["second_guard"] = list(rs.second_guard)
    return payload


def cmd_analyze(args) -> int:
    configuration = _load_config(args.config)
    if args.lss or args.mbp:
        payload = _mbp_payload(configuration, with_frames=args.mbp)
    elif args.symmetry:
        autos = symmetry.automorphisms(configuration)
        payload = {
            "symmetric": bool(autos),
            "automorphisms": [
                symmetry.classify(configuration.kind, m, t) for m, t in autos
            ],
        }
    else:
        if not args.pattern:
            raise ValueError("this analysis needs --pattern")
        pattern = _load_pattern(args.pattern, configuration.kind)
        if args.refsys:
            payload = _refsys_payload(configuration, pattern)
        else:
            ev = decision.evaluate(configuration, pattern)
            payload = {"task": ev.task, "variables": ev.variables}
    print(json.dumps(payload, indent=2, sort_keys=False))
    return 0


def cmd_render(args) -> int:
    from . import render

    if args.patch:
        render.render_patch(args.patch, args.size, args.out)
        return 0
    configuration = _load_config(args.config)
    pattern = None
    if args.pattern:
        pattern = _load_pattern(args.pattern, configuration.kind)
    render.render_config(configuration, args.out, pattern=pattern)
    return 0


def cmd_fuzz(args) -> int:
    rng = Random(args.seed)
    grids = [args.grid] if args.grid else list(lattice.KINDS)
    schedulers = [args.scheduler] if args.scheduler else list(harness.SCHEDULERS)
    print("seed\tgrid\tn\tscheduler\texit\tevents\tformed\tviolation")
    worst = 0
    for _ in range(args.runs):
        grid = grids[rng.randrange(len(grids))]
        scheduler = schedulers[rng.randrange(len(schedulers))]
        sub = rng.randrange(2**32)
        local = Random(sub)
        configuration = _sample_config(grid, args.n, local)
        pattern = _sample_pattern(grid, args.n, local)
        result = harness.simulate(
            configuration, pattern, scheduler=scheduler,
            seed=sub, budget=args.budget,
        )
        worst = max(worst, result.exit_code)
        violation = result.violation or "-"
        print(
            f"{sub}\t{grid}\t{configuration.n}\t{scheduler}\t{result.exit_code}"
            f"\t{result.events}\t{int(result.formed)}\t{violation}"
        )
    return 0 if worst == 0 else 2


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="gridform",
        description="Pattern formation for oblivious robots on regular grids.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="simulate one formation attempt")
    p_run.add_argument("--config", required=True)
    p_run.add_argument("--pattern", required=True)
    p_run.add_argument("--scheduler", choices=harness.SCHEDULERS, default="async")
    p_run.add_argument("--seed", type=int, default=0)
    p_run.add_argument("--budget", type=int, default=10**6)
    p_run.add_argument("--trace", help="write a JSON-lines event trace here")
    p_run.add_argument("--report", help="directory for SVG frames and moves.tsv")
    p_run.set_defaults(func=cmd_run)

    p_gen = sub.add_parser("gen", help="generate a random input file")
    p_gen.add_argument("--grid", choices=lattice.KINDS, required=True)
    p_gen.add_argument("--n", type=int, required=True)
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("--pattern", action="store_true",
                       help="emit a goal multiset instead of a start")
    p_gen.add_argument("--out")
    p_gen.set_defaults(func=cmd_gen)

    p_an = sub.add_parser("analyze", help="inspect one configuration")
    p_an.add_argument("--config", required=True)
    p_an.add_argument("--pattern")
    mode = p_an.add_mutually_exclusive_group(required=True)
    mode.add_argument("--lss", action="store_true")
    mode.add_argument("--mbp", action="store_true")
    mode.add_argument("--symmetry", action="store_true")
    mode.add_argument("--refsys", action="store_true")
    mode.add_argument("--predicates", action="store_true")
    p_an.set_defaults(func=cmd_analyze)

    p_rd = sub.add_parser("render", help="draw an SVG snapshot")
    p_rd.add_argument("--config")
    p_rd.add_argument("--pattern")
    p_rd.add_argument("--patch", choices=lattice.KINDS,
                      help="draw a bare grid patch instead of a configuration")
    p_rd.add_argument("--size", type=int, default=20)
    p_rd.add_argument("--out", required=True)
    p_rd.set_defaults(func=cmd_render)

    p_fz = sub.add_parser("fuzz", help="many seeded runs, TSV to stdout")
    p_fz.add_argument("--grid", choices=lattice.KINDS)
    p_fz.add_argument("--n", type=int, default=5)
    p_fz.add_argument("--runs", type=int, default=20)
    p_fz.add_argument("--seed", type=int, default=0)
    p_fz.add_argument("--scheduler", choices=harness.SCHEDULERS)
    p_fz.add_argument("--budget", type=int, default=10**6)
    p_fz.set_defaults(func=cmd_fuzz)

    args = parser.parse_args(argv)
    if args.command == "render" and not args.patch and not args.config:
        parser.error("render needs --config or --patch")
    try:
        return args.func(args)
    except (ValueError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
