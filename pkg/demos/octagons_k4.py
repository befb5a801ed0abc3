"""Build the 8-sided dual of K4 step by step and print what each stage produces.

Run: python3 demos/octagons_k4.py [out-dir]
"""

import sys
from pathlib import Path

from rectcart.generate import k4
from rectcart.geometry import side_count
from rectcart.octo import is_area_universal, maximal_segments, octagons_direct, skeleton, subdivide, t_contacts
from rectcart.render import render_svg
from rectcart.verify import verify_layout

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
g = k4()
sk = skeleton(g)
name = g.labels.__getitem__
print("canonical order:", [name(v) for v in sk.order.seq])
for v in sk.realizer.inner:
    s = sk.realizer
    print(f"parents of {name(v)}: tree 1 -> {name(s.phi1[v])}, tree 2 -> {name(s.phi2[v])}, tree 3 -> {name(s.phi3[v])}")
print("ranks:", {name(v): r for v, r in sorted(sk.pi.items())})

t = t_contacts(sk)
for v in range(g.n):
    print(f"T-shape of {name(v)}: bar {t.h[v]}, stem {t.b[v]}")

layout = octagons_direct(sk)
for v, poly in enumerate(layout.polygons):
    print(f"polygon of {name(v)}: {side_count(poly)} sides, corners {[(str(x), str(y)) for x, y in poly]}")
sd = subdivide(layout)
print("maximal segments:", len(maximal_segments(sd)), "area-universal:", is_area_universal(sd))
print("verification:", verify_layout(layout, g).as_dict(g.labels))
(out / "k4.svg").write_text(render_svg(layout))
print("wrote", out / "k4.svg")
