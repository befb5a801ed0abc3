import itertools
import time

import pytest

from rectcart.generate import gen_random_triangulation
from rectcart.graph import InstanceError
from rectcart.orders import (
    SchnyderRealizer,
    all_canonical_orders,
    canonical_order,
    order_from_realizer,
    realizer_from_order,
    topo_pi,
    verify_canonical,
    verify_realizer,
)


def _connected(g, verts):
    verts = set(verts)
    if not verts:
        return True
    start = next(iter(verts))
    seen, stack = {start}, [start]
    while stack:
        x = stack.pop()
        for y in g.rotation[x]:
            if y in verts and y not in seen:
                seen.add(y)
                stack.append(y)
    return seen == verts


def shelling_oracle(g, seq):
    """Every prefix of length >= 3 is 2-connected and every suffix after it is connected."""
    v1, v2, vn = g.outer
    if (seq[0], seq[1], seq[-1]) != (v1, v2, vn):
        return False
    for k in range(3, g.n + 1):
        pre = seq[:k]
        if any(not _connected(g, set(pre) - {x}) for x in pre):
            return False
        if not _connected(g, seq[k:]):
            return False
    return True


def names(g, seq):
    return tuple(g.labels[v] for v in seq)


def test_k4_order(K4):
    assert names(K4, canonical_order(K4).seq) == tuple("uvcw")


def test_triangle_order(TRI):
    assert names(TRI, canonical_order(TRI).seq) == tuple("uvw")


def test_verify_canonical_k4(K4):
    u, v, w, c = (K4.index(s) for s in "uvwc")
    assert verify_canonical(K4, (u, v, c, w))
    assert not verify_canonical(K4, (u, v, w, c))


@pytest.mark.parametrize("which", ["octa", "r7", "r8"])
def test_canonical_orders_match_shelling_oracle(OCTA, which):
    g = {"octa": OCTA, "r7": gen_random_triangulation(7, 11), "r8": gen_random_triangulation(8, 3)}[which]
    v1, v2, vn = g.outer
    rest = [x for x in range(g.n) if x not in g.outer]
    oracle = {(v1, v2) + p + (vn,) for p in itertools.permutations(rest) if shelling_oracle(g, (v1, v2) + p + (vn,))}
    enumerated = {o.seq for o in all_canonical_orders(g)}
    checked = {(v1, v2) + p + (vn,) for p in itertools.permutations(rest) if verify_canonical(g, (v1, v2) + p + (vn,))}
    assert oracle == enumerated == checked
    assert canonical_order(g).seq in oracle


def test_hundred_random_orders_verify():
    for seed in range(100):
        g = gen_random_triangulation(5 + seed % 40, seed)
        o = canonical_order(g)
        assert verify_canonical(g, o), seed
        assert verify_realizer(g, realizer_from_order(g, o)), seed


def test_k4_realizer(K4):
    u, v, w, c = (K4.index(s) for s in "uvwc")
    s = realizer_from_order(K4, canonical_order(K4))
    assert (s.phi1[c], s.phi2[c], s.phi3[c]) == (u, v, w)
    assert verify_realizer(K4, s)
    assert order_from_realizer(K4, s).seq == (u, v, c, w)


def test_broken_pattern_rejected(K4):
    u, v, w, c = (K4.index(s) for s in "uvwc")
    s = realizer_from_order(K4, canonical_order(K4))
    bad = SchnyderRealizer(s.graph, s.roots, {c: u}, {c: u}, {c: w})
    assert not verify_realizer(K4, bad)


def test_cyclic_realizer_rejected(OCTA):
    s = realizer_from_order(OCTA, canonical_order(OCTA))
    inner = s.inner
    a, b = inner[0], inner[1]
    # force a 2-cycle between tree 1 and tree 3 arcs: a above b in tree 3 and b above a in tree 1
    phi1 = dict(s.phi1)
    phi3 = dict(s.phi3)
    phi1[a], phi3[a] = b, b
    bad = SchnyderRealizer(s.graph, s.roots, phi1, s.phi2, phi3)
    with pytest.raises(InstanceError, match="cycle"):
        order_from_realizer(OCTA, bad)


def test_octahedron_realizer_valid(OCTA):
    assert verify_realizer(OCTA, realizer_from_order(OCTA, canonical_order(OCTA)))


def test_topo_pi_k4(K4):
    s = realizer_from_order(K4, canonical_order(K4))
    pi = topo_pi(K4, s)
    assert {K4.labels[v]: r for v, r in pi.items()} == {"u": 1, "c": 2, "w": 3, "v": 4}


def test_topo_pi_triangle(TRI):
    s = realizer_from_order(TRI, canonical_order(TRI))
    pi = topo_pi(TRI, s)
    assert {TRI.labels[v]: r for v, r in pi.items()} == {"u": 1, "w": 2, "v": 3}


def test_topo_pi_respects_arcs():
    for seed in range(30):
        g = gen_random_triangulation(20, seed)
        s = realizer_from_order(g, canonical_order(g))
        pi = topo_pi(g, s)
        assert sorted(pi.values()) == list(range(1, g.n + 1))
        for x, p in s.parents(1).items():
            assert pi[p] < pi[x]
        for x, p in s.parents(2).items():
            assert pi[x] < pi[p]


def test_canonical_order_runs_in_linear_time():
    def run(n):
        g = gen_random_triangulation(n, 1)
        t = time.perf_counter()
        canonical_order(g)
        return time.perf_counter() - t

    run(2000)
    small = min(run(5000) for _ in range(3))
    big = min(run(20000) for _ in range(3))
    # quadrupling n; a quadratic method would be about 16 times slower
    assert big / small < 8
