import math
from fractions import Fraction as F

import pytest

from rectcart.generate import gen_random_triangulation, k4, random_weights
from rectcart.geometry import Layout, Rect, polygon_area
from rectcart.graph import make_instance
from rectcart.octo import build_octagons, subdivide
from rectcart.relax import (
    RelaxError,
    RelaxParams,
    RelaxState,
    cartographic_error,
    min_feature_size,
    prepare,
    relax,
    split_weights,
    wall_force,
)
from rectcart.verify import combinatorial_equiv, verify_layout


def grid_state(widths, heights, targets):
    """Rectangles of a ``len(widths) x len(heights)`` grid, one vertex per cell, row by row."""
    xs = [0.0]
    for w in widths:
        xs.append(xs[-1] + w)
    ys = [0.0]
    for h in heights:
        ys.append(ys[-1] + h)
    rects = [Rect(xs[i], ys[j], xs[i + 1], ys[j + 1]) for j in range(len(heights)) for i in range(len(widths))]
    k = len(rects)
    return RelaxState(rects, range(k), targets, targets, Rect(0.0, 0.0, xs[-1], ys[-1]), (xs[-1], ys[-1]))


def stacked(bottom, top):
    return grid_state([1.0], [1.0, 1.0], [bottom, top])


def instance(n, seed):
    g = gen_random_triangulation(n, seed)
    return make_instance(g, random_weights(n, seed)), subdivide(build_octagons(g))


def test_split_k4_unit_weight():
    g = k4()
    inst = make_instance(g, frame=(2, 2))
    sd = subdivide(build_octagons(g))
    c = g.index("c")
    ws = {(v, k): t for v, k, t in split_weights(inst, sd).entries}
    assert ws[(c, "H")] == F(1, 2) and ws[(c, "B")] == F(1, 2)
    assert ws.get((c, "L"), 0) == 0 and ws.get((c, "R"), 0) == 0


def test_split_conserves_area():
    inst, sd = instance(20, 3)
    rw = split_weights(inst, sd)
    assert sum(t for _, _, t in rw.entries) == inst.area
    assert rw.per_vertex() == dict(enumerate(inst.weights))


def test_force_arithmetic():
    assert wall_force([(2, 1), (3, 2)], [(1, 3)]) == 5


def test_balanced_grid_has_zero_force():
    st = grid_state([1.0, 1.0, 1.0], [1.0, 1.0], [1.0] * 6)
    assert st.n_seg == 3
    assert all(abs(f) < 1e-12 for f in st.force)


def test_force_is_minus_energy_gradient():
    inst, sd = instance(15, 2)
    st = prepare(inst, sd)
    h = 1e-6
    for s in range(0, st.n_seg, 3):
        x = st.pos[s]
        st.pos[s] = x + h
        e_plus = st.energy()
        st.pos[s] = x - h
        e_minus = st.energy()
        st.pos[s] = x
        numeric = -(e_plus - e_minus) / (2 * h)
        assert st._force(s) == pytest.approx(numeric, rel=1e-5, abs=1e-6)


def test_inflating_a_region_lowers_its_push():
    # bottom region pushes the shared wall up with pressure target / area
    st = stacked(1.0, 1.0)
    f0 = st.force[0]
    st.move(0, 0.1)  # bottom region grows
    assert st.force[0] < f0


def test_small_top_moves_wall_down():
    st = stacked(1.5, 0.5)
    y0 = st.pos[0]
    st = stacked(0.5, 1.5)
    assert st.force[0] < 0
    moved = st.step(0.1)
    assert moved is not None and st.pos[0] < y0


def test_clamped_move_keeps_contacts():
    st = stacked(0.001, 1.999)
    for _ in range(20):
        if st.step(1e6) is None:
            break
        assert st.height(0) >= st.delta * 0.999 and st.height(1) > 0
    st2 = stacked(0.001, 1.999)
    st2.newton_step(1e6)
    assert st2.height(0) >= st2.delta * 0.999


def test_error_non_increasing_by_window_on_grid():
    widths, heights = [0.3, 0.7], [0.4, 0.6]
    targets = [w * h for h in heights for w in widths]
    for method in ("pressure", "newton"):
        st = grid_state([0.5, 0.5], [0.5, 0.5], targets)
        errs = [st.error()]
        for _ in range(2000):
            if st.error() < 1e-4:
                break
            if (st.step(0.1) if method == "pressure" else st.newton_step()) is None:
                break
            errs.append(st.error())
        window = 4
        marks = errs[::window]
        assert all(b <= a + 1e-12 for a, b in zip(marks, marks[1:])), method
        assert errs[-1] < 1e-3


def test_exact_layout_needs_no_steps():
    st = grid_state([1.0, 1.0], [1.0], [1.0, 1.0])
    stats = relax(st)
    assert stats.iterations == 0 and stats.converged


def test_budget_one_is_flagged():
    inst, sd = instance(20, 1)
    st = prepare(inst, sd)
    stats = relax(st, RelaxParams(max_iters=1))
    assert stats.iterations == 1 and not stats.converged
    assert verify_layout(st.layout(), inst.graph).ok()


@pytest.mark.parametrize("method", ["newton", "pressure"])
def test_random_instance_converges(method):
    inst, sd = instance(10, 5)
    st = prepare(inst, sd)
    seed = st.layout()
    stats = relax(st, RelaxParams(method=method, max_iters=200_000))
    assert stats.converged and stats.error < 0.01
    out = st.layout()
    assert cartographic_error(out, inst.weights) == pytest.approx(stats.error, abs=1e-9)
    assert combinatorial_equiv(seed, out)


def test_relax_is_deterministic():
    inst, sd = instance(25, 8)
    a, b = prepare(inst, sd), prepare(inst, sd)
    relax(a, RelaxParams(seed=1))
    relax(b, RelaxParams(seed=2))
    assert a.pos == b.pos


def test_cartographic_error_examples():
    polys = (Rect(0, 0, 1, 1).corners(), Rect(1, 0, 2, 1).corners())
    lay = Layout(polys, Rect(0, 0, 2, 1), ("a", "b"))
    assert cartographic_error(lay, [1, 1]) == 0
    lay2 = Layout((Rect(0, 0, F(6, 5), 1).corners(), Rect(F(6, 5), 0, 2, 1).corners()), Rect(0, 0, 2, 1), ("a", "b"))
    assert cartographic_error(lay2, [1, F(4, 5)]) == pytest.approx(0.2)


def shoelace(poly):
    s = 0.0
    for (x0, y0), (x1, y1) in zip(poly, poly[1:] + poly[:1]):
        s += x0 * y1 - x1 * y0
    return abs(s) / 2


def test_cartographic_error_matches_shoelace():
    for seed in range(5):
        inst, sd = instance(12, seed)
        st = prepare(inst, sd)
        relax(st, RelaxParams(max_iters=3))
        lay = st.layout()
        ws = [float(w) for w in inst.weights]
        mine = max(abs(shoelace(list(p)) - w) / w for p, w in zip(lay.polygons, ws))
        assert cartographic_error(lay, ws) == pytest.approx(mine, rel=1e-12)
        assert st.error() == pytest.approx(mine, rel=1e-9)


def test_unit_square_feature_size():
    st = RelaxState([Rect(0, 0, 1, 1)], [0], [1.0], [1.0], Rect(0, 0, 1, 1), (1, 1))
    assert min_feature_size(st) == 1


def test_feature_size_bound_after_convergence():
    for seed in range(5):
        inst, sd = instance(20, seed)
        st = prepare(inst, sd)
        assert relax(st).converged
        W, H = map(float, inst.frame)
        assert W == H == pytest.approx(math.sqrt(float(inst.area)))
        assert min_feature_size(st) >= 0.9 * float(inst.w_min) / (2 * math.sqrt(float(inst.area)))


def test_area_is_conserved_per_step():
    inst, sd = instance(30, 4)
    st = prepare(inst, sd)
    A = st.area_total

    def audit(s, it):
        assert abs(sum(s.vertex_areas()) - A) <= 1e-9 * A

    relax(st, RelaxParams(), audit)


def test_bad_params_rejected():
    with pytest.raises(RelaxError):
        RelaxParams(eta=0)
    with pytest.raises(RelaxError):
        RelaxParams(method="annealing")
    with pytest.raises(RelaxError):
        RelaxParams(select="random")


def test_polygon_area_of_relaxed_layout_is_float():
    inst, sd = instance(8, 1)
    st = prepare(inst, sd)
    relax(st)
    assert sum(polygon_area(p) for p in st.layout().polygons) == pytest.approx(float(inst.area))
