"""Command-line front end.

Exit codes: 0 success, 2 invalid input or failed check, 3 relaxation
budget exhausted (the best layout is still written).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import replace
from fractions import Fraction
from pathlib import Path
from typing import Sequence

from .bench import BENCH_FIELDS, run_bench
from .generate import double_fan, fan_outerplanar, gen_random_triangulation, random_outerplanar, random_weights
from .geometry import GeometryError
from .graph import InstanceError, augment_to_maximal, dump_instance, parse_instance, validate
from .hamiltonian import (
    ConstructionError,
    find_cycle,
    ham_cartogram,
    outerplanar_cartogram,
    parse_cycle,
    six_sided_cartogram,
)
from .io import dump_layout, dump_realizer, parse_layout, stats_csv, with_parts
from .octo import DEFAULT_LAMBDA, octagons_direct, skeleton, subdivide
from .relax import RelaxError, RelaxParams, prepare, relax
from .render import render_svg
from .verify import verify_layout

SEED_ENV = "RECTCART_SEED"
MODES = ("schnyder8", "hamiltonian8", "onelegged6", "outerplanar6")
SIDE_BOUND = {"schnyder8": 8, "hamiltonian8": 8, "onelegged6": 6, "outerplanar6": 6}
EXIT_OK, EXIT_INVALID, EXIT_BUDGET = 0, 2, 3


class CliError(Exception):
    """Reported on stderr with exit code 2."""


def default_seed() -> int:
    raw = os.environ.get(SEED_ENV, "0")
    try:
        return int(raw)
    except ValueError:
        raise CliError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(str(exc)) from None


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _number_range(text: str) -> list[int]:
    """``"10"``, ``"10,20,30"`` or ``"10:50:10"`` (inclusive)."""
    if ":" in text:
        parts = [int(p) for p in text.split(":")]
        lo, hi = parts[0], parts[1]
        step = parts[2] if len(parts) > 2 else 1
        return list(range(lo, hi + 1, step))
    return [int(p) for p in text.split(",") if p]


# -- commands ---------------------------------------------------------------------


def cmd_gen(args: argparse.Namespace) -> int:
    seed = default_seed() if args.seed is None else args.seed
    if args.kind == "triangulation":
        g = gen_random_triangulation(args.n, seed)
    elif args.kind == "double-fan":
        g = double_fan(args.n)
    elif args.kind == "outerplanar":
        g = random_outerplanar(args.n, seed)
    else:
        g = fan_outerplanar(args.n)
    weights = random_weights(args.n, seed, args.lo, args.hi) if args.weights == "random" else [1.0] * args.n
    _write(args.output, dump_instance(g, weights) + "\n")
    return EXIT_OK


def cmd_build(args: argparse.Namespace) -> int:
    inst = parse_instance(_read(args.input))
    g = inst.graph
    mode = args.mode
    extra = {"mode": mode}
    if mode == "schnyder8":
        aux: list[int] = []
        if len(g.outer) != 3:
            if not args.augment:
                raise CliError("schnyder8 needs a maximal plane graph (use --augment for inner triangulations)")
            g, aux = augment_to_maximal(g)
        report = validate(g)
        if report.problems:
            raise CliError("; ".join(report.problems))
        sk = skeleton(g)
        layout = octagons_direct(sk, Fraction(args.lam))
        layout = with_parts(layout, subdivide(layout).rects)
        if aux:
            layout = replace(layout, auxiliary=tuple(aux))
        if args.realizer_out:
            _write(args.realizer_out, dump_realizer(sk))
    elif mode == "outerplanar6":
        layout = outerplanar_cartogram(inst).layout
    else:
        if len(g.outer) != 3:
            raise CliError(f"{mode} needs a maximal plane graph")
        if args.cycle:
            cycle = parse_cycle(g, args.cycle)
        else:
            if g.n > 12:
                raise CliError("pass --cycle for graphs with more than 12 vertices")
            cycle = find_cycle(g, one_legged=mode == "onelegged6")
            if cycle is None:
                kind = "one-legged Hamiltonian" if mode == "onelegged6" else "Hamiltonian"
                raise CliError(f"no {kind} cycle closes on the outer face")
        build = six_sided_cartogram if mode == "onelegged6" else ham_cartogram
        layout = build(inst, cycle).layout
        extra["cycle"] = [g.labels[v] for v in cycle]
    _write(args.output, dump_layout(layout, **extra))
    return EXIT_OK


def cmd_realize(args: argparse.Namespace) -> int:
    inst = parse_instance(_read(args.instance))
    layout, data = parse_layout(_read(args.layout))
    mode = data.get("mode", "schnyder8")
    if mode != "schnyder8":
        raise CliError(f"layouts built with {mode} already have exact areas")
    if layout.labels[: inst.graph.n] != inst.graph.labels:
        raise CliError("layout and instance list different vertices")
    if layout.auxiliary:
        raise CliError("layouts with auxiliary vertices cannot be realized")
    sd = subdivide(layout)
    state = prepare(inst, sd)
    seed = default_seed() if args.seed is None else args.seed
    params = RelaxParams(eta=args.eta, max_iters=args.max_iters, eps=args.eps, seed=seed, method=args.method)
    stats = relax(state, params)
    out = state.layout()
    pressures = state.pressures()
    extra = {
        "mode": "cartogram",
        "pressure": {out.labels[v]: p for v, p in enumerate(pressures)},
        "error": stats.error,
        "iterations": stats.iterations,
    }
    _write(args.output, dump_layout(out, **extra))
    if args.stats:
        row = {"instance": args.name or Path(args.instance).stem, "n": inst.graph.n, "iterations": stats.iterations,
               "error": stats.error, "ms": stats.millis}
        _write(args.stats, stats_csv([row]))
    if not stats.converged:
        print(f"budget exhausted: error {stats.error:.4g} after {stats.iterations} steps", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    inst = parse_instance(_read(args.instance))
    layout, data = parse_layout(_read(args.layout))
    g = inst.graph
    if layout.auxiliary:
        g = augment_to_maximal(g)[0]
    if layout.labels != g.labels:
        raise CliError("layout and instance list different vertices")
    bound = args.bound or SIDE_BOUND.get(data.get("mode"), 8)
    report = verify_layout(layout, g)
    _write(args.output, json.dumps(report.as_dict(g.labels, bound), indent=1) + "\n")
    return EXIT_OK if report.ok(bound) else EXIT_INVALID


def cmd_render(args: argparse.Namespace) -> int:
    layout, data = parse_layout(_read(args.layout))
    pressures = None
    if args.pressure:
        if "pressure" in data:
            pressures = [float(data["pressure"][s]) for s in layout.labels]
        else:
            # layouts from exact constructions carry no pressure: every region is balanced
            pressures = [1.0] * layout.n
    _write(args.output, render_svg(layout, pressures, size=args.size))
    return EXIT_OK


def cmd_bench(args: argparse.Namespace) -> int:
    seed = default_seed() if args.seed is None else args.seed
    rows = run_bench(_number_range(args.n), args.trials, args.lo, args.hi, args.eps, seed, args.method,
                     args.calibrate, args.max_iters)
    dicts = [r.as_dict() for r in rows]
    if args.no_timing:
        for d in dicts:
            d["ms"] = ""
    _write(args.output, stats_csv(dicts, BENCH_FIELDS))
    return EXIT_OK if all(r.converged for r in rows) else EXIT_BUDGET


# -- parser -----------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rectcart", description="Rectilinear duals and cartograms of plane triangulations.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="write a random instance")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--kind", choices=("triangulation", "double-fan", "outerplanar", "fan"), default="triangulation")
    g.add_argument("--weights", choices=("random", "unit"), default="random")
    g.add_argument("--lo", type=float, default=10.0)
    g.add_argument("--hi", type=float, default=100.0)
    g.add_argument("--seed", type=int, default=None, help=f"default: ${SEED_ENV} or 0")
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    b = sub.add_parser("build", help="build a rectilinear dual or exact cartogram")
    b.add_argument("input")
    b.add_argument("--mode", choices=MODES + ("onelgged6",), default="schnyder8")
    b.add_argument("--lambda", dest="lam", default=str(DEFAULT_LAMBDA), help="bar thickness in (0, 1), e.g. 1/2")
    b.add_argument("--cycle", help="comma-separated labels v1,...,vn for Hamiltonian modes")
    b.add_argument("--augment", action="store_true", help="add two outer vertices to an inner triangulation")
    b.add_argument("--realizer-out", help="also write the order and realizer dump")
    b.add_argument("-o", "--output")
    b.set_defaults(func=cmd_build)

    r = sub.add_parser("realize", help="relax a schnyder8 layout towards the instance weights")
    r.add_argument("layout")
    r.add_argument("instance")
    r.add_argument("--eps", type=float, default=0.01)
    r.add_argument("--max-iters", type=int, default=1_000_000)
    r.add_argument("--eta", type=float, default=1.0)
    r.add_argument("--method", choices=("newton", "pressure"), default="newton")
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("--stats", help="write a one-row stats CSV")
    r.add_argument("--name", help="instance id for the stats row")
    r.add_argument("-o", "--output")
    r.set_defaults(func=cmd_realize)

    v = sub.add_parser("verify", help="check contacts, side counts and hole-freeness")
    v.add_argument("layout")
    v.add_argument("instance")
    v.add_argument("--bound", type=int, default=None, help="side bound (default from the layout mode)")
    v.add_argument("-o", "--output")
    v.set_defaults(func=cmd_verify)

    d = sub.add_parser("render", help="write an SVG drawing")
    d.add_argument("layout")
    d.add_argument("--pressure", action="store_true", help="colour regions by pressure")
    d.add_argument("--size", type=float, default=600.0)
    d.add_argument("-o", "--output")
    d.set_defaults(func=cmd_render)

    k = sub.add_parser("bench", help="benchmark relaxation on random instances")
    k.add_argument("--n", default="10:50:10", help="sizes: 10,20 or 10:50:10")
    k.add_argument("--trials", type=int, default=5)
    k.add_argument("--lo", type=float, default=10.0)
    k.add_argument("--hi", type=float, default=100.0)
    k.add_argument("--eps", type=float, default=0.01)
    k.add_argument("--calibrate", type=float, default=0.05)
    k.add_argument("--max-iters", type=int, default=1_000_000)
    k.add_argument("--method", choices=("newton", "pressure"), default="newton")
    k.add_argument("--seed", type=int, default=None)
    k.add_argument("--no-timing", action="store_true", help="leave the ms column empty (stable output)")
    k.add_argument("-o", "--output")
    k.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "mode", None) == "onelgged6":
        args.mode = "onelegged6"
    try:
        return args.func(args)
    except (CliError, InstanceError, GeometryError, RelaxError, ConstructionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
