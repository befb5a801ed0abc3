"""Exact cartograms along a Hamiltonian cycle: 8 sides in general, 6 when the cycle is one-legged.

Run: python3 demos/exact_cartograms.py
"""

from rectcart.generate import octahedron, random_outerplanar
from rectcart.geometry import polygon_area, side_count
from rectcart.graph import make_instance
from rectcart.hamiltonian import (
    find_cycle,
    ham_cartogram,
    one_legged_report,
    outerplanar_cartogram,
    six_sided_cartogram,
    two_legged_set,
)
from rectcart.render import render_svg

g = octahedron()
inst = make_instance(g, [1, 2, 3, 4, 5, 6])
for one_legged in (False, True):
    order = find_cycle(g, one_legged=one_legged)
    labels = [g.labels[v] for v in order]
    bad = sorted(g.labels[v] for v in two_legged_set(g, order))
    print(f"cycle {labels}: two-legged vertices {bad}")
    print("  predicates (a) to (e):", one_legged_report(g, order).values())
    build = six_sided_cartogram if one_legged else ham_cartogram
    h = build(inst, order)
    print("  sides:", [side_count(p) for p in h.layout.polygons])
    print("  areas:", [str(polygon_area(p)) for p in h.layout.polygons])
    print("  weights:", [str(w) for w in inst.weights])
    name = "octahedron-6.svg" if one_legged else "octahedron-8.svg"
    with open(name, "w") as f:
        f.write(render_svg(h.layout, [1.0] * g.n))
    print("  wrote", name)

op = random_outerplanar(10, 3)
h = outerplanar_cartogram(make_instance(op, list(range(1, 11))))
print("outer-planar sides:", [side_count(p) for p in h.layout.polygons])
