"""Benchmark harness: random instances, time to a target error, error at a fixed budget."""

from __future__ import annotations

import statistics
from dataclasses import asdict, dataclass
from typing import Callable, Iterable

from .generate import gen_random_triangulation, random_weights
from .graph import WeightedInstance, make_instance
from .octo import RectSubdivision, build_octagons, subdivide
from .relax import RelaxParams, RelaxState, prepare, relax

BENCH_FIELDS = ("instance", "n", "trial", "iterations", "error", "ms", "converged", "steps_to_calibrate",
                "budget", "budget_error")


@dataclass
class BenchRow:
    instance: str
    n: int
    trial: int
    iterations: int
    error: float
    ms: float
    converged: bool
    steps_to_calibrate: int | None
    budget: int = 0
    budget_error: float = float("nan")

    def as_dict(self) -> dict:
        return asdict(self)


def instance_seed(seed: int, n: int, trial: int) -> int:
    return seed * 1_000_003 + 1000 * n + trial


def bench_instance(n: int, trial: int, seed: int = 0, lo: float = 10, hi: float = 100
                   ) -> tuple[WeightedInstance, RectSubdivision]:
    s = instance_seed(seed, n, trial)
    g = gen_random_triangulation(n, s)
    inst = make_instance(g, random_weights(n, s, lo, hi))
    return inst, subdivide(build_octagons(g))


def run_bench(
    ns: Iterable[int],
    trials: int,
    lo: float = 10,
    hi: float = 100,
    eps: float = 0.01,
    seed: int = 0,
    method: str = "newton",
    calibrate: float = 0.05,
    max_iters: int = 1_000_000,
    audit: Callable[[RelaxState, int], None] | None = None,
    setup: Callable[[RelaxState], None] | None = None,
) -> list[BenchRow]:
    """Relax ``trials`` random instances per ``n`` and report both measures.

    For each ``n`` the budget is the median number of steps an instance
    needs to drop below ``calibrate``; ``budget_error`` is the error each
    instance has after exactly that many steps.  ``setup`` sees each fresh
    state before relaxation and ``audit`` every step.
    """
    rows: list[BenchRow] = []
    for n in ns:
        block = []
        for t in range(trials):
            inst, sd = bench_instance(n, t, seed, lo, hi)
            state = prepare(inst, sd)
            if setup is not None:
                setup(state)
            trace = [state.error()]

            def record(st: RelaxState, it: int, trace=trace) -> None:
                trace.append(st.error())
                if audit is not None:
                    audit(st, it)

            stats = relax(state, RelaxParams(eps=eps, max_iters=max_iters, seed=seed, method=method), record)
            first = next((k for k, e in enumerate(trace) if e < calibrate), None)
            row = BenchRow(f"n{n}-t{t}", n, t, stats.iterations, stats.error, stats.millis, stats.converged, first)
            block.append((row, state, trace))
        reached = [r.steps_to_calibrate for r, _, _ in block if r.steps_to_calibrate is not None]
        budget = int(statistics.median(reached)) if reached else max_iters
        for row, state, trace in block:
            row.budget = budget
            if budget < len(trace):
                row.budget_error = trace[budget]
            else:
                more = relax(state, RelaxParams(eps=0, max_iters=budget - (len(trace) - 1), method=method))
                row.budget_error = more.error
            rows.append(row)
    return rows
