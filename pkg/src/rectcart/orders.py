"""Canonical orders, Schnyder realizers and the conversions between them.

Conventions: for an order ``v1, v2, ..., vn`` the graph is oriented so
that its outer walk is ``(v1, v2, vn)``.  With clockwise rotations the
predecessors of an inner vertex form one contiguous block; ``phi1`` is
the first of them clockwise, ``phi2`` the last, and ``phi3`` the
highest-numbered successor.  Tree ``k`` is rooted at the ``k``-th entry of
``roots``.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Mapping, Sequence

from .graph import InstanceError, PlaneTriangulation, edge_key, validate


@dataclass(frozen=True)
class CanonicalOrder:
    seq: tuple[int, ...]

    @cached_property
    def canon(self) -> dict[int, int]:
        """Vertex -> 1-based position."""
        return {v: k + 1 for k, v in enumerate(self.seq)}

    def __len__(self) -> int:
        return len(self.seq)

    def __iter__(self):
        return iter(self.seq)


@dataclass(frozen=True)
class SchnyderRealizer:
    """Parent maps of the three trees, defined on inner vertices.

    ``graph`` is oriented so that its outer walk equals ``roots``.
    """

    graph: PlaneTriangulation = field(compare=False, repr=False)
    roots: tuple[int, int, int]
    phi1: Mapping[int, int]
    phi2: Mapping[int, int]
    phi3: Mapping[int, int]

    def __eq__(self, other):
        if not isinstance(other, SchnyderRealizer):
            return NotImplemented
        return (
            self.roots == other.roots
            and dict(self.phi1) == dict(other.phi1)
            and dict(self.phi2) == dict(other.phi2)
            and dict(self.phi3) == dict(other.phi3)
        )

    def __hash__(self):
        return hash((self.roots, tuple(sorted(self.phi1.items())), tuple(sorted(self.phi2.items()))))

    @property
    def inner(self) -> list[int]:
        return sorted(self.phi1)

    def parents(self, k: int, augmented: bool = True) -> dict[int, int]:
        """Parent map of tree ``k`` (1, 2 or 3), optionally with the outer augmentation.

        The augmentation adds ``v2 -> v1`` and ``vn -> v1`` to tree 1,
        ``vn -> v2`` to tree 2 and ``v1 -> vn``, ``v2 -> vn`` to tree 3.
        """
        v1, v2, vn = self.roots
        base = dict((self.phi1, self.phi2, self.phi3)[k - 1])
        if augmented:
            base.update({1: {v2: v1, vn: v1}, 2: {vn: v2}, 3: {v1: vn, v2: vn}}[k])
        return base

    def children(self, k: int, augmented: bool = True) -> dict[int, list[int]]:
        out: dict[int, list[int]] = {}
        for x, p in self.parents(k, augmented).items():
            out.setdefault(p, []).append(x)
        return out


def _oriented(g: PlaneTriangulation, v1: int, v2: int, vn: int) -> PlaneTriangulation:
    if tuple(g.outer) == (v1, v2, vn):
        return g
    try:
        return g.with_outer(v1, v2, vn)
    except InstanceError:
        raise InstanceError(f"({v1}, {v2}, {vn}) is not a face") from None


# -- canonical order ---------------------------------------------------------


def canonical_order(g: PlaneTriangulation) -> CanonicalOrder:
    """Canonical order with ``v1, v2, vn`` equal to the outer walk ``(u, v, w)``.

    Reverse shelling: starting from the contour ``v1, vn, v2``, repeatedly
    remove a contour vertex without chords.  Chord counts are updated
    locally, so the whole run takes linear time.
    """
    report = validate(g)
    if report.problems:
        raise InstanceError("; ".join(report.problems))
    n = g.n
    v1, v2, vn = g.outer
    if n == 3:
        return CanonicalOrder((v1, v2, vn))
    state = [0] * n  # 0 = not yet on contour, 1 = on contour, 2 = removed
    left: dict[int, int] = {}  # contour neighbour towards v1
    right: dict[int, int] = {}  # contour neighbour towards v2
    chords = [0] * n
    for x in (v1, vn, v2):
        state[x] = 1
    right[v1], left[vn], right[vn], left[v2] = vn, v1, v2, vn
    free = [vn]
    removed: list[int] = []
    rot = g.rotation
    pos = g._pos
    while free:
        x = free.pop()
        if state[x] != 1 or chords[x] or x in (v1, v2):
            continue
        a, b = left[x], right[x]
        r = rot[x]
        k = (pos[x][a] + 1) % len(r)
        new = []
        while r[k] != b:
            new.append(r[k])
            k = (k + 1) % len(r)
        state[x] = 2
        removed.append(x)
        if len(removed) == n - 2:
            break
        if not new:
            chords[a] -= 1
            chords[b] -= 1
            right[a], left[b] = b, a
            for y in (a, b):
                if chords[y] == 0:
                    free.append(y)
            continue
        chain = [a] + new + [b]
        for t in range(1, len(chain) - 1):
            c = chain[t]
            state[c] = 1
            left[c], right[c] = chain[t - 1], chain[t + 1]
        right[a], left[b] = new[0], new[-1]
        fresh = set(new)
        for c in new:
            for y in rot[c]:
                if state[y] == 1 and y != left[c] and y != right[c]:
                    chords[c] += 1
                    if y not in fresh:
                        chords[y] += 1
        for c in reversed(new):
            if chords[c] == 0:
                free.append(c)
    if len(removed) != n - 2:
        raise InstanceError("reverse shelling got stuck")
    return CanonicalOrder((v1, v2) + tuple(reversed(removed)))


def _restricted_faces(g: PlaneTriangulation, keep: set[int]) -> list[list[int]]:
    """Face walks of the rotation system induced on ``keep``."""
    rot = {v: [u for u in g.rotation[v] if u in keep] for v in keep}
    pos = {v: {u: k for k, u in enumerate(r)} for v, r in rot.items()}
    seen: set[tuple[int, int]] = set()
    faces = []
    for v in keep:
        for u in rot[v]:
            if (v, u) in seen:
                continue
            walk = []
            a, b = v, u
            while (a, b) not in seen:
                seen.add((a, b))
                walk.append(a)
                r = rot[b]
                a, b = b, r[(pos[b][a] + 1) % len(r)]
            faces.append(walk)
    return faces


def verify_canonical(g: PlaneTriangulation, order: CanonicalOrder | Sequence[int]) -> bool:
    """Check the shelling conditions by direct simulation (quadratic time).

    ``v1, v2, vn`` must be the outer vertices; for every prefix the induced
    graph must be biconnected with all bounded faces being faces of ``g``
    and an outer cycle through ``(v1, v2)``, and each new vertex must see a
    contiguous stretch of at least two vertices of the previous contour.
    """
    seq = list(order)
    n = g.n
    if sorted(seq) != list(range(n)) or n < 3:
        return False
    v1, v2, vn = seq[0], seq[1], seq[-1]
    if {v1, v2, vn} != set(g.outer) or not g.has_edge(v1, v2):
        return False
    gface: dict[tuple[int, int], int] = {}
    for fi, f in enumerate(g.faces):
        for t in range(len(f)):
            gface[(f[t], f[(t + 1) % len(f)])] = fi
    prev_contour: list[int] | None = None
    for k in range(3, n + 1):
        keep = set(seq[:k])
        x = seq[k - 1]
        m_k = sum(1 for a in keep for b in g.rotation[a] if b in keep) // 2
        faces = _restricted_faces(g, keep)
        if k - m_k + len(faces) != 2:
            return False
        outer = []
        for f in faces:
            ids = {gface[(f[t], f[(t + 1) % len(f)])] for t in range(len(f))}
            if len(f) == 3 and len(ids) == 1:
                continue
            outer.append(f)
        if k == n:
            if outer:
                return False
        else:
            if len(outer) != 1:
                return False
            cyc = outer[0]
            if len(set(cyc)) != len(cyc):
                return False
            i = cyc.index(v1)
            cyc = cyc[i:] + cyc[:i]
            if cyc[1] == v2:
                contour = [v1] + cyc[:0:-1]
            elif cyc[-1] == v2:
                contour = cyc
            else:
                return False
        if k > 3 and prev_contour is not None:
            idx = [t for t, c in enumerate(prev_contour) if g.has_edge(x, c)]
            placed = sum(1 for c in g.rotation[x] if c in keep and c != x)
            if len(idx) < 2 or idx[-1] - idx[0] != len(idx) - 1 or placed != len(idx):
                return False
        elif k == 3 and not (g.has_edge(x, v1) and g.has_edge(x, v2)):
            return False
        if k < n:
            prev_contour = contour
    return True


# -- realizers ---------------------------------------------------------------


def realizer_from_order(g: PlaneTriangulation, order: CanonicalOrder | Sequence[int]) -> SchnyderRealizer:
    """Parents from a canonical order: first/last predecessor and highest successor."""
    order = order if isinstance(order, CanonicalOrder) else CanonicalOrder(tuple(order))
    if not verify_canonical(g, order):
        raise InstanceError("order is not canonical")
    seq = order.seq
    h = _oriented(g, seq[0], seq[1], seq[-1])
    canon = order.canon
    phi1, phi2, phi3 = {}, {}, {}
    for x in seq[2:-1]:
        r = h.rotation[x]
        cx = canon[x]
        d = len(r)
        # start at a successor directly followed (clockwise) by a predecessor
        s = next(t for t in range(d) if canon[r[t]] > cx and canon[r[(t + 1) % d]] < cx)
        preds = []
        t = (s + 1) % d
        while canon[r[t]] < cx:
            preds.append(r[t])
            t = (t + 1) % d
        phi1[x], phi2[x] = preds[0], preds[-1]
        phi3[x] = max((u for u in r if canon[u] > cx), key=canon.__getitem__)
    return SchnyderRealizer(h, (seq[0], seq[1], seq[-1]), phi1, phi2, phi3)


def verify_realizer(g: PlaneTriangulation, s: SchnyderRealizer) -> bool:
    """Check parents, the edge partition, the local pattern and acyclicity."""
    v1, v2, vn = s.roots
    try:
        h = _oriented(g, v1, v2, vn)
    except InstanceError:
        return False
    outer = {v1, v2, vn}
    inner = set(range(h.n)) - outer
    maps = (s.phi1, s.phi2, s.phi3)
    if any(set(m) != inner for m in maps):
        return False
    covered: set[tuple[int, int]] = set()
    for k, m in enumerate(maps):
        for x, p in m.items():
            if not h.has_edge(x, p) or (p in outer and p != s.roots[k]):
                return False
            e = edge_key(x, p)
            if e in covered:
                return False
            covered.add(e)
    if len(covered) != h.m - 3:
        return False
    # clockwise from out3: out3, in2*, out1, in3*, out2, in1*
    expected = ("o3", "i2", "o1", "i3", "o2", "i1")
    for x in inner:
        r = h.rotation[x]
        labels = []
        for u in r:
            if u == s.phi1[x]:
                labels.append("o1")
            elif u == s.phi2[x]:
                labels.append("o2")
            elif u == s.phi3[x]:
                labels.append("o3")
            else:
                labels.append("i" + str(next(k + 1 for k, m in enumerate(maps) if m.get(u) == x)))
        t = labels.index("o3")
        labels = labels[t:] + labels[:t]
        stage = 0
        for lab in labels:
            while stage < 6 and expected[stage] != lab:
                if expected[stage].startswith("o"):
                    return False
                stage += 1
            if stage == 6:
                return False
            if lab.startswith("o"):
                stage += 1
    for k, m in enumerate(maps):
        root = s.roots[k]
        done = {root}
        for x in inner:
            path = []
            y = x
            while y not in done:
                if y in path:
                    return False
                path.append(y)
                if y not in m:
                    return False
                y = m[y]
            done.update(path)
    return True


def _topo(n: int, arcs: list[tuple[int, int]], key, first: Sequence[int] = ()) -> list[int]:
    indeg = [0] * n
    out: list[list[int]] = [[] for _ in range(n)]
    for a, b in arcs:
        out[a].append(b)
        indeg[b] += 1
    res = []
    forced = set(first)
    for v in first:
        if indeg[v]:
            raise InstanceError("cycle in the realizer digraph")
        res.append(v)
        for b in out[v]:
            indeg[b] -= 1
    heap = [(key(v), v) for v in range(n) if indeg[v] == 0 and v not in forced]
    heapq.heapify(heap)
    while heap:
        _, v = heapq.heappop(heap)
        res.append(v)
        for b in out[v]:
            indeg[b] -= 1
            if indeg[b] == 0 and b not in forced:
                heapq.heappush(heap, (key(b), b))
    if len(res) != n:
        raise InstanceError("cycle in the realizer digraph")
    return res


def order_from_realizer(g: PlaneTriangulation, s: SchnyderRealizer) -> CanonicalOrder:
    """Topological order of the tree-1 and tree-2 arcs reversed plus tree-3 arcs.

    ``v1`` and ``v2`` come first; ties go to the smallest vertex id.
    """
    v1, v2, vn = s.roots
    arcs = []
    for x in s.phi1:
        arcs += [(s.phi1[x], x), (s.phi2[x], x), (x, s.phi3[x])]
    seq = _topo(g.n, arcs, key=lambda v: v, first=(v1, v2))
    if seq[-1] != vn:
        raise InstanceError("realizer does not end at its third root")
    return CanonicalOrder(tuple(seq))


def topo_pi(g: PlaneTriangulation, s: SchnyderRealizer, order: CanonicalOrder | None = None) -> dict[int, int]:
    """Rank (1..n) in a topological order of reversed tree 1 plus tree 2.

    Both trees carry their outer augmentation, so every vertex is ranked.
    Ties go to the smallest canonical number.
    """
    if order is None:
        order = order_from_realizer(g, s)
    canon = order.canon
    p1, p2 = s.parents(1), s.parents(2)
    arcs = [(p, x) for x, p in p1.items()] + list(p2.items())
    seq = _topo(g.n, arcs, key=canon.__getitem__)
    return {v: k + 1 for k, v in enumerate(seq)}


def attach(g: PlaneTriangulation, placed: Sequence[bool], x: int, contour: list[int]) -> list[int] | None:
    """Contour after adding ``x``, or ``None`` when ``x`` may not come next.

    ``x`` fits when its placed neighbours are consecutive in its rotation,
    number at least two, and form a stretch of the contour.
    """
    r = g.rotation[x]
    d = len(r)
    flags = [placed[u] for u in r]
    if not any(flags):
        return None
    if all(flags):
        return contour + [x] if set(r) == set(contour) else None
    s = next(t for t in range(d) if not flags[t] and flags[(t + 1) % d])
    block = []
    t = (s + 1) % d
    while flags[t]:
        block.append(r[t])
        t = (t + 1) % d
    if len(block) != sum(flags) or len(block) < 2:
        return None
    for cand in (block, block[::-1]):
        try:
            i = contour.index(cand[0])
        except ValueError:
            continue
        if contour[i : i + len(cand)] == cand:
            return contour[: i + 1] + [x] + contour[i + len(cand) - 1 :]
    return None


def all_canonical_orders(g: PlaneTriangulation, roots: tuple[int, int, int] | None = None) -> Iterator[CanonicalOrder]:
    """Every canonical order with the given ``(v1, v2, vn)`` (default: the outer walk).

    Depth-first placement: a vertex may be placed when its placed
    neighbours are consecutive in its rotation, number at least two, and
    appear in the same order as a stretch of the current contour.
    """
    v1, v2, vn = g.outer if roots is None else roots
    h = _oriented(g, v1, v2, vn)
    n = h.n
    placed = [False] * n
    placed[v1] = placed[v2] = True
    seq = [v1, v2]

    def rec(contour: list[int]) -> Iterator[CanonicalOrder]:
        if len(seq) == n:
            yield CanonicalOrder(tuple(seq))
            return
        for x in range(n):
            if placed[x] or (x == vn and len(seq) < n - 1):
                continue
            nxt = attach(h, placed, x, contour)
            if nxt is None:
                continue
            placed[x] = True
            seq.append(x)
            yield from rec(nxt)
            seq.pop()
            placed[x] = False

    yield from rec([v1, v2])
