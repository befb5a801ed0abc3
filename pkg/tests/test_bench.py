from rectcart.bench import BENCH_FIELDS, instance_seed, run_bench
from rectcart.io import read_csv, stats_csv


def test_rows_and_budget():
    rows = run_bench([10, 12], trials=3, seed=4)
    assert [(r.n, r.trial) for r in rows] == [(10, 0), (10, 1), (10, 2), (12, 0), (12, 1), (12, 2)]
    assert all(r.converged and r.error < 0.01 for r in rows)
    for n in (10, 12):
        block = [r for r in rows if r.n == n]
        assert len({r.budget for r in block}) == 1
        steps = sorted(r.steps_to_calibrate for r in block)
        assert block[0].budget == steps[1]
        assert all(r.budget_error == r.budget_error for r in block)  # not NaN


def test_csv_is_seed_stable():
    def table():
        rows = [r.as_dict() for r in run_bench([10], trials=2, seed=9)]
        for r in rows:
            r["ms"] = ""
        return stats_csv(rows, BENCH_FIELDS)

    a, b = table(), table()
    assert a == b
    assert list(read_csv(a)[0]) == list(BENCH_FIELDS)


def test_instance_seeds_distinct():
    seeds = {instance_seed(0, n, t) for n in range(10, 60, 10) for t in range(25)}
    assert len(seeds) == 125
