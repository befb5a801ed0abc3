"""Exact cartograms along a Hamiltonian cycle, one-leggedness, and its equivalent conditions.

Vertices ``v1..vn`` of the cycle are placed bottom-up.  Each polygon is a
body rectangle spanning two reserved vertical strips plus a leg inside
each strip reaching down to the vertex's earliest neighbour on that side.
All coordinates are exact fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .geometry import Layout, Rect, polygon_area, side_count, simplify, union_polygon
from .graph import (
    HamiltonianCycle,
    InstanceError,
    PlaneTriangulation,
    WeightedInstance,
    check_cycle,
    edge_key,
    find_hamiltonian_cycles,
    is_maximal_outerplanar,
    split_left_right,
)
from .orders import SchnyderRealizer, attach, realizer_from_order, verify_canonical


class ConstructionError(InstanceError):
    """A precondition of a Hamiltonian construction fails."""


# -- leg sets -------------------------------------------------------------------


@dataclass(frozen=True)
class LegSets:
    """Where each vertex's left and right strips start.

    Positions are 0-based cycle indices.  ``first_left[k]`` is the smallest
    index ``i < k`` with ``(v_i, v_k)`` a left edge (``None`` for ``v_1``);
    ``v_k`` belongs to the left set of ``j`` exactly when
    ``first_left[k] <= j < k``.
    """

    first_left: tuple[int | None, ...]
    first_right: tuple[int | None, ...]

    @property
    def n(self) -> int:
        return len(self.first_left)

    def left(self, j: int) -> list[int]:
        return [k for k in range(j + 1, self.n) if self.first_left[k] is not None and self.first_left[k] <= j]

    def right(self, j: int) -> list[int]:
        return [k for k in range(j + 1, self.n) if self.first_right[k] is not None and self.first_right[k] <= j]


def _first(n: int, edges: Iterable[tuple[int, int]]) -> tuple[int | None, ...]:
    out: list[int | None] = [None] * n
    for a, b in edges:
        i, k = min(a, b), max(a, b)
        if out[k] is None or i < out[k]:
            out[k] = i
    return tuple(out)


def _indexed(split_edges: Iterable[tuple[int, int]], pos: dict[int, int]) -> list[tuple[int, int]]:
    return [(pos[a], pos[b]) for a, b in split_edges]


def leg_sets(g: PlaneTriangulation, cycle: HamiltonianCycle | Sequence[int]) -> LegSets:
    s = split_left_right(g, cycle)
    pos = s.cycle.index
    return LegSets(_first(g.n, _indexed(s.left, pos)), _first(g.n, _indexed(s.right, pos)))


# -- the construction -------------------------------------------------------------


@dataclass(frozen=True)
class HamLayout:
    """A cartogram built along a Hamiltonian cycle.

    ``layout.parts[v]`` names the pieces ``body``, ``left_leg`` and
    ``right_leg`` (legs of zero height are left out); ``lams[v]`` is the
    leg width of ``v``.
    """

    layout: Layout
    lams: tuple[Fraction, ...]
    order: tuple[int, ...]

    @property
    def frame(self) -> tuple[Fraction, Fraction]:
        b = self.layout.bbox
        return (b.x1 - b.x0, b.y1 - b.y0)

    def body(self, v: int) -> Rect:
        return self.layout.parts[v]["body"]

    def left_leg(self, v: int) -> Rect | None:
        return self.layout.parts[v].get("left_leg")

    def right_leg(self, v: int) -> Rect | None:
        return self.layout.parts[v].get("right_leg")

    def min_feature_size(self) -> Fraction:
        """Thinnest side over all pieces."""
        return min(min(r.width, r.height) for p in self.layout.parts for r in p.values())


def _stack(legs: LegSets, weights: Sequence[Fraction], W: Fraction, H: Fraction) -> list[dict[str, Rect]]:
    """Place bodies and legs for cycle positions ``0..n-1``.

    Returns the pieces per cycle position.  Raises when an invariant of
    the construction fails, which signals a bad split.
    """
    n = legs.n
    lam = [w / (2 * H + W) for w in weights]
    new_left: list[list[int]] = [[] for _ in range(n)]
    new_right: list[list[int]] = [[] for _ in range(n)]
    for k in range(1, n):
        if legs.first_left[k] is None or legs.first_right[k] is None:
            raise ConstructionError(f"cycle position {k} has no earlier neighbour on one side")
        new_left[legs.first_left[k]].append(k)
        new_right[legs.first_right[k]].append(k)
    # strips as (k, x0, x1, y_start); the innermost strip is last
    left: list[tuple[int, Fraction, Fraction, Fraction]] = []
    right: list[tuple[int, Fraction, Fraction, Fraction]] = []
    reserved = Fraction(0)
    pieces: list[dict[str, Rect]] = []
    top = Fraction(0)
    for i in range(n):
        if i == 0:
            x0, x1 = Fraction(0), W
            parts: dict[str, Rect] = {}
            legs_area = Fraction(0)
        else:
            k, x0, lx1, ly = left.pop()
            k2, rx0, x1, ry = right.pop()
            if k != i or k2 != i:
                raise ConstructionError(f"strips of cycle position {i} are not innermost")
            reserved -= 2 * lam[i]
            parts = {}
            legs_area = Fraction(0)
            if ly < top:
                parts["left_leg"] = Rect(x0, ly, lx1, top)
                legs_area += lam[i] * (top - ly)
            if ry < top:
                parts["right_leg"] = Rect(rx0, ry, x1, top)
                legs_area += lam[i] * (top - ry)
        height = (weights[i] - legs_area) / (x1 - x0)
        if height <= 0:
            raise ConstructionError(f"body of cycle position {i} has no room")
        parts["body"] = Rect(x0, top, x1, top + height)
        top += height
        pieces.append(parts)
        # reserve strips for new neighbours: descending from the left end,
        # ascending towards the right end
        cl = x0
        for k in sorted(new_left[i], reverse=True):
            left.append((k, cl, cl + lam[k], top))
            cl += lam[k]
            reserved += lam[k]
        cr = x1
        for k in sorted(new_right[i], reverse=True):
            right.append((k, cr - lam[k], cr, top))
            cr -= lam[k]
            reserved += lam[k]
        if i < n - 1 and (cl >= cr or reserved > W - 2 * lam[i]):
            raise ConstructionError(f"reserved strips leave no room above cycle position {i}")
    if left or right:
        raise ConstructionError("unused strips remain")
    if top != H:
        raise ConstructionError("stack does not fill the frame")
    return pieces


def _outline(parts: dict[str, Rect]) -> tuple:
    """Counter-clockwise outline of a body with legs hanging from its ends."""
    b = parts["body"]
    ll, rl = parts.get("left_leg"), parts.get("right_leg")
    if ll is not None and rl is not None and ll.x1 >= rl.x0:
        return union_polygon(parts.values())
    pts = [(b.x0, ll.y0), (ll.x1, ll.y0), (ll.x1, b.y0)] if ll is not None else [(b.x0, b.y0)]
    pts += [(rl.x0, b.y0), (rl.x0, rl.y0), (b.x1, rl.y0)] if rl is not None else [(b.x1, b.y0)]
    pts += [(b.x1, b.y1), (b.x0, b.y1)]
    return simplify(pts)


def _assemble(order: Sequence[int], pieces: list[dict[str, Rect]], n: int, bbox: Rect,
              labels: Sequence[str], lam: Sequence[Fraction]) -> HamLayout:
    polys: list[tuple] = [()] * n
    parts: list[dict[str, Rect]] = [{}] * n
    lams: list[Fraction] = [Fraction(0)] * n
    for i, v in enumerate(order):
        polys[v] = _outline(pieces[i])
        parts[v] = pieces[i]
        lams[v] = lam[i]
    return HamLayout(Layout(tuple(polys), bbox, tuple(labels), parts=tuple(parts)), tuple(lams), tuple(order))


def _prepare(inst: WeightedInstance, cycle) -> tuple[HamiltonianCycle, LegSets, list[Fraction]]:
    g = inst.graph
    c = check_cycle(g, cycle)
    legs = leg_sets(g, c)
    return c, legs, [inst.weights[v] for v in c.order]


def ham_cartogram(inst: WeightedInstance, cycle: HamiltonianCycle | Sequence[int]) -> HamLayout:
    """Exact cartogram with at most 8 sides per polygon.

    ``cycle`` lists ``v1..vn`` with ``(v1, vn)`` on the outer face.
    """
    c, legs, w = _prepare(inst, cycle)
    W, H = inst.frame
    pieces = _stack(legs, w, W, H)
    lam = [x / (2 * H + W) for x in w]
    return _assemble(c.order, pieces, inst.graph.n, Rect(Fraction(0), Fraction(0), W, H), inst.graph.labels, lam)


def two_legged_set(g: PlaneTriangulation, cycle: HamiltonianCycle | Sequence[int]) -> set[int]:
    """Vertices ``v_j`` with an earlier neighbour ``v_i``, ``i < j - 1``, on both sides."""
    legs = leg_sets(g, cycle)
    order = check_cycle(g, cycle).order
    out = set()
    for j in range(legs.n):
        fl, fr = legs.first_left[j], legs.first_right[j]
        if fl is not None and fr is not None and fl < j - 1 and fr < j - 1:
            out.add(order[j])
    return out


def six_sided_cartogram(inst: WeightedInstance, cycle: HamiltonianCycle | Sequence[int]) -> HamLayout:
    """Exact cartogram with at most 6 sides for a one-legged cycle."""
    bad = two_legged_set(inst.graph, cycle)
    if bad:
        names = ", ".join(inst.graph.labels[v] for v in sorted(bad))
        raise ConstructionError(f"cycle is two-legged at {names}")
    out = ham_cartogram(inst, cycle)
    for v, p in enumerate(out.layout.polygons):
        if side_count(p) > 6:
            raise ConstructionError(f"polygon of {inst.graph.labels[v]} has more than 6 sides")
    return out


def outerplanar_cartogram(inst: WeightedInstance) -> HamLayout:
    """Exact cartogram with at most 6 sides for a maximal outer-planar graph.

    The graph is glued to a copy of itself along the outer cycle, so
    every edge is both a left and a right edge.  The doubled weights are
    stacked in a ``2W x H`` frame, and the mirror-symmetric result is
    cut at ``x = W``.
    """
    g = inst.graph
    if not is_maximal_outerplanar(g):
        raise ConstructionError("graph is not maximal outer-planar")
    order = tuple(g.outer)
    pos = {v: i for i, v in enumerate(order)}
    both = _first(g.n, _indexed(g.edge_set, pos))
    legs = LegSets(both, both)
    W, H = inst.frame
    w = [2 * inst.weights[v] for v in order]
    pieces = _stack(legs, w, 2 * W, H)
    half = Rect(Fraction(0), Fraction(0), W, H)
    cut = []
    for p in pieces:
        mirrored = {k: Rect(2 * W - r.x1, r.y0, 2 * W - r.x0, r.y1) for k, r in p.items()}
        swapped = {{"left_leg": "right_leg", "right_leg": "left_leg"}.get(k, k): r for k, r in mirrored.items()}
        if swapped != p:
            raise ConstructionError("doubled layout is not mirror-symmetric")
        cut.append({k: r.clip(half) for k, r in p.items() if k != "right_leg"})
    out = _assemble(order, cut, g.n, half, g.labels, [x / (2 * H + 2 * W) for x in w])
    for v, p in enumerate(out.layout.polygons):
        if polygon_area(p) != inst.weights[v]:
            raise ConstructionError("cut does not halve an area exactly")
    return out


def closing_orders(g: PlaneTriangulation, c: HamiltonianCycle) -> list[tuple[int, ...]]:
    """Ways to list ``c`` as ``v1..vn`` with ``(v1, vn)`` an edge of the outer face."""
    order = c.order
    n = len(order)
    outer = set(edge_key(g.outer[k], g.outer[(k + 1) % len(g.outer)]) for k in range(len(g.outer)))
    out = []
    for k in range(n):
        if edge_key(order[k], order[(k + 1) % n]) in outer:
            seq = order[k + 1:] + order[: k + 1]
            out.append(tuple(seq))
            out.append(tuple(reversed(seq)))
    return out


def find_cycle(g: PlaneTriangulation, one_legged: bool = False, limit: int | None = None
               ) -> tuple[int, ...] | None:
    """First Hamiltonian cycle (optionally one-legged) that closes on the outer face.

    Exhaustive, so limited to small graphs unless ``limit`` is given.
    """
    for c in find_hamiltonian_cycles(g, limit):
        for seq in closing_orders(g, c):
            if not one_legged or not two_legged_set(g, seq):
                return seq
    return None


def parse_cycle(g: PlaneTriangulation, text: str) -> tuple[int, ...]:
    """Comma-separated vertex labels ``v1,...,vn``."""
    index = {s: k for k, s in enumerate(g.labels)}
    try:
        seq = tuple(index[t.strip()] for t in text.split(",") if t.strip())
    except KeyError as exc:
        raise InstanceError(f"unknown vertex {exc}") from None
    check_cycle(g, seq)
    return seq


# -- equivalent conditions for one-leggedness --------------------------------------


@dataclass(frozen=True)
class EquivalenceReport:
    one_legged: bool
    outer_edges: bool
    two_back: bool
    reversed_canonical: bool
    leaf_realizer: bool

    def values(self) -> tuple[bool, bool, bool, bool, bool]:
        return (self.one_legged, self.outer_edges, self.two_back, self.reversed_canonical, self.leaf_realizer)

    @property
    def agree(self) -> bool:
        return len(set(self.values())) == 1


def _require_outer_closing(g: PlaneTriangulation, order: Sequence[int]) -> None:
    if not {order[0], order[-1]} <= set(g.outer):
        raise InstanceError("(v1, vn) is not on the outer triangle")


def outer_edge_condition(g: PlaneTriangulation, order: Sequence[int]) -> bool:
    """Each ``(v_{i-1}, v_i)`` lies on the outer face of the graph induced by ``v_1..v_i``.

    Faces of ``g`` are merged with union-find while vertices are removed
    from ``v_n`` downwards; a face of the induced graph is outer when its
    merged class holds the outer face of ``g``.
    """
    n = g.n
    faces = g.faces
    face_id: dict[tuple[int, int], int] = {}
    for fi, f in enumerate(faces):
        for t in range(len(f)):
            face_id[(f[t], f[(t + 1) % len(f)])] = fi
    parent = list(range(len(faces)))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    outer = face_id[(g.outer[0], g.outer[1])]
    pos = {v: i for i, v in enumerate(order)}
    for i in range(n - 1, 0, -1):
        a, b = order[i - 1], order[i]
        root = find(outer)
        if find(face_id[(a, b)]) != root and find(face_id[(b, a)]) != root:
            return False
        for u in g.rotation[b]:
            if pos[u] < i:
                x, y = find(face_id[(b, u)]), find(face_id[(u, b)])
                parent[x] = y
    return True


def two_back_condition(g: PlaneTriangulation, order: Sequence[int]) -> bool:
    """``v_{n-1}`` is outer and every ``v_i``, ``i <= n-2``, has two later neighbours."""
    n = g.n
    if order[n - 2] not in g.outer:
        return False
    pos = {v: i for i, v in enumerate(order)}
    for i in range(n - 2):
        if sum(1 for u in g.rotation[order[i]] if pos[u] > i) < 2:
            return False
    return True


def leaf_realizer(g: PlaneTriangulation, roots: tuple[int, int, int],
                  follow: Sequence[int] | None = None) -> SchnyderRealizer | None:
    """A realizer with the given roots in which every inner vertex is a leaf of tree 1 or 2.

    Searches canonical orders depth-first.  When a vertex is placed its
    first and last predecessors become its parents in trees 1 and 2, and
    when the last neighbour of a vertex is placed it becomes that
    vertex's parent in tree 3.  A branch is cut as soon as some inner
    vertex has children in both trees 1 and 2.

    With ``follow`` the realizer must also admit ``follow`` as a
    topological order: parents in trees 1 and 2 come earlier in
    ``follow`` and the parent in tree 3 comes later.
    """
    if set(roots) != set(g.outer):
        return None
    try:
        h = g.with_outer(*roots)
    except InstanceError:
        return None
    v1, v2, vn = roots
    n = h.n
    rank = {v: i for i, v in enumerate(follow)} if follow is not None else None
    placed = [False] * n
    placed[v1] = placed[v2] = True
    waiting = [sum(1 for u in h.rotation[v] if not placed[u]) for v in range(n)]
    seq = [v1, v2]
    left_kids = [0] * n
    right_kids = [0] * n
    inner = set(range(n)) - {v1, v2, vn}
    dead: set[tuple] = set()

    def rec(contour: list[int]) -> list[int] | None:
        if len(seq) == n:
            return list(seq)
        key = (tuple(contour), tuple(placed), tuple(left_kids), tuple(right_kids))
        if key in dead:
            return None
        for x in range(n):
            if placed[x] or (x == vn and len(seq) < n - 1):
                continue
            nxt = attach(h, placed, x, contour)
            if nxt is None:
                continue
            ok = True
            a = b = -1
            if x != vn:
                i = nxt.index(x)
                a, b = nxt[i - 1], nxt[i + 1]
                left_kids[a] += 1
                right_kids[b] += 1
                ok = not any(u in inner and left_kids[u] and right_kids[u] for u in (a, b))
                if rank is not None and (rank[a] > rank[x] or rank[b] > rank[x]):
                    ok = False
            for u in h.rotation[x]:
                waiting[u] -= 1
                # x is the last neighbour of u to be placed: the tree-3 parent of u
                if waiting[u] == 0 and u in inner and rank is not None and rank[x] < rank[u]:
                    ok = False
            if ok:
                placed[x] = True
                seq.append(x)
                found = rec(nxt)
                if found is not None:
                    return found
                seq.pop()
                placed[x] = False
            for u in h.rotation[x]:
                waiting[u] += 1
            if x != vn:
                left_kids[a] -= 1
                right_kids[b] -= 1
        dead.add(key)
        return None

    found = rec([v1, v2])
    if found is None:
        return None
    return realizer_from_order(h, found)


def is_leaf_realizer(s: SchnyderRealizer) -> bool:
    """Every inner vertex is childless in tree 1 or in tree 2."""
    c1, c2 = s.children(1, augmented=False), s.children(2, augmented=False)
    return all(not c1.get(v) or not c2.get(v) for v in s.inner)


def one_legged_report(g: PlaneTriangulation, cycle: HamiltonianCycle | Sequence[int]) -> EquivalenceReport:
    """Evaluate the five equivalent conditions independently.

    The conditions are: the cycle is one-legged; each cycle edge is
    outer when it is added; the ``two later neighbours`` count; the
    reversed cycle is a canonical order; and some realizer rooted at
    ``v_n, v_{n-1}, v_1`` that has the reversed cycle as a topological
    order makes every inner vertex a leaf of tree 1 or 2.
    """
    c = check_cycle(g, cycle)
    order = c.order
    _require_outer_closing(g, order)
    n = g.n
    rev = tuple(reversed(order))
    s = leaf_realizer(g, (rev[0], rev[1], rev[-1]), follow=rev)
    return EquivalenceReport(
        one_legged=not two_legged_set(g, c),
        outer_edges=outer_edge_condition(g, order),
        two_back=two_back_condition(g, order),
        reversed_canonical=n >= 3 and verify_canonical(g, rev),
        leaf_realizer=s is not None and is_leaf_realizer(s),
    )


__all__ = [
    "ConstructionError",
    "closing_orders",
    "find_cycle",
    "parse_cycle",
    "EquivalenceReport",
    "HamLayout",
    "LegSets",
    "ham_cartogram",
    "is_leaf_realizer",
    "leaf_realizer",
    "leg_sets",
    "one_legged_report",
    "outer_edge_condition",
    "outerplanar_cartogram",
    "six_sided_cartogram",
    "two_back_condition",
    "two_legged_set",
]
