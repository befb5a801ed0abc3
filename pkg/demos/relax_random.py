"""Relax a random 30-vertex dual towards random weights and report the error after each step.

Run: python3 demos/relax_random.py [seed]
"""

import sys

from rectcart.generate import gen_random_triangulation, random_weights
from rectcart.graph import make_instance
from rectcart.octo import build_octagons, subdivide
from rectcart.relax import RelaxParams, min_feature_size, prepare, relax
from rectcart.render import render_svg
from rectcart.verify import combinatorial_equiv

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 0
n = 30
g = gen_random_triangulation(n, seed)
inst = make_instance(g, random_weights(n, seed))
state = prepare(inst, subdivide(build_octagons(g)))
start = state.layout()
print(f"step 0: error {state.error():.4f}")


def show(st, it):
    print(f"step {it}: error {st.error():.4f}")


stats = relax(state, RelaxParams(eps=0.001), show)
print(f"converged: {stats.converged} after {stats.iterations} steps in {stats.millis:.1f} ms")
print("same combinatorial layout as the start:", combinatorial_equiv(start, state.layout()))
print(f"min feature size {min_feature_size(state):.4f}, "
      f"bound {float(inst.w_min) / (2 * max(map(float, inst.frame))):.4f}")
with open(f"relaxed-{seed}.svg", "w") as f:
    f.write(render_svg(state.layout(), state.pressures()))
print(f"wrote relaxed-{seed}.svg")
