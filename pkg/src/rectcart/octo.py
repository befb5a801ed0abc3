"""Eight-sided area-universal rectilinear duals from a Schnyder realizer.

Vertex ``v`` with canonical number ``c(v)`` and topological rank ``pi(v)``
is drawn as a T-shape: a horizontal bar at height ``c(v)`` and a vertical
bar at ``x = pi(v)``.  Fattening the bars by ``lam`` and giving every hole
to the bar below it yields polygons with at most eight sides.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .geometry import GeometryError, Layout, Number, Rect, polygon_area, simplify, union_polygon
from .graph import InstanceError, PlaneTriangulation
from .orders import CanonicalOrder, SchnyderRealizer, canonical_order, realizer_from_order, topo_pi

DEFAULT_LAMBDA = Fraction(1, 2)


@dataclass(frozen=True)
class Skeleton:
    """Order data shared by every construction path."""

    graph: PlaneTriangulation
    order: CanonicalOrder
    realizer: SchnyderRealizer
    pi: dict[int, int]

    @property
    def n(self) -> int:
        return self.graph.n


def skeleton(g: PlaneTriangulation) -> Skeleton:
    order = canonical_order(g)
    s = realizer_from_order(g, order)
    return Skeleton(s.graph, order, s, topo_pi(g, s, order))


@dataclass(frozen=True)
class TContactRep:
    """Per vertex a horizontal bar ``(x0, x1, y)`` and a vertical bar ``(x, y0, y1)``."""

    skeleton: Skeleton
    h: dict[int, tuple[int, int, int]]
    b: dict[int, tuple[int, int, int]]


def t_contacts(sk: Skeleton) -> TContactRep:
    """Integer T-shapes; the three outer vertices frame the drawing."""
    n = sk.n
    c = sk.order.canon
    pi = sk.pi
    v1, v2, vn = sk.realizer.roots
    p1, p2, p3 = (sk.realizer.parents(k) for k in (1, 2, 3))
    h, b = {}, {}
    h[v1] = (pi[v1], pi[v2], 1)
    b[v1] = (pi[v1], 1, n + 1)
    h[v2] = (pi[v1], pi[v2], 2)
    b[v2] = (pi[v2], 2, n + 1)
    h[vn] = (pi[v1], pi[v2], n)
    b[vn] = (pi[vn], n, n + 1)
    for x in sk.realizer.phi1:
        h[x] = (pi[p1[x]], pi[p2[x]], c[x])
        b[x] = (pi[x], c[x], c[p3[x]])
    return TContactRep(sk, h, b)


def _check_lambda(lam: Number) -> Fraction:
    lam = Fraction(lam)
    if not 0 < lam < 1:
        raise InstanceError("lambda must lie strictly between 0 and 1")
    return lam


def _frame(n: int, half: Fraction) -> Rect:
    return Rect(1 - half, 1 - half, n + half, n + half)


def _layout(sk: Skeleton, polys: dict[int, tuple], lam: Fraction) -> Layout:
    n = sk.n
    return Layout(
        polygons=tuple(polys[v] for v in range(n)),
        bbox=_frame(n, lam / 2),
        labels=sk.graph.labels,
        lam=lam,
        columns=tuple(Fraction(sk.pi[v]) for v in range(n)),
    )


# -- direct coordinates --------------------------------------------------------


def octagons_direct(sk: Skeleton, lam: Number = DEFAULT_LAMBDA) -> Layout:
    """Polygon corners computed straight from parents, children and ranks.

    Interior vertex ``i``: base at ``c(i) - lam/2``, top at
    ``c(phi3(i)) - lam/2``, left side at ``pi(phi1(i)) + lam/2``, right side
    at ``pi(phi2(i)) - lam/2``.  The left side stops below the lowest
    tree-2 child and the right side below the lowest tree-1 child; from
    there the outline steps in to the bar ``pi(i) -+ lam/2``.
    """
    lam = _check_lambda(lam)
    half = lam / 2
    n = sk.n
    c = sk.order.canon
    pi = sk.pi
    v1, v2, vn = sk.realizer.roots
    p1, p2, p3 = (sk.realizer.parents(k) for k in (1, 2, 3))
    kids1, kids2 = sk.realizer.children(1), sk.realizer.children(2)
    frame = _frame(n, half)
    polys = {}
    for v in range(n):
        if v == vn:
            polys[v] = simplify(frame.clip(Rect(frame.x0, n - half, frame.x1, frame.y1)).corners())
            continue
        xl = frame.x0 if v == v1 else pi[p1[v]] + half
        xr = frame.x1 if v in (v1, v2) else pi[p2[v]] - half
        yb = c[v] - half
        yt = c[p3[v]] - half
        cl, cr = pi[v] - half, pi[v] + half
        yl = min((c[j] for j in kids2.get(v, ())), default=None)
        yr = min((c[j] for j in kids1.get(v, ())), default=None)
        yl = yt if yl is None else min(yl - half, yt)
        yr = yt if yr is None else min(yr - half, yt)
        pts = [(xl, yb), (xr, yb), (xr, yr), (cr, yr), (cr, yt), (cl, yt), (cl, yl), (xl, yl)]
        polys[v] = simplify(pts)
    return _layout(sk, polys, lam)


# -- fattening path ------------------------------------------------------------


def fattened_bars(t: TContactRep, lam: Number = DEFAULT_LAMBDA) -> tuple[dict[int, Rect], dict[int, Rect]]:
    """Bars thickened by ``lam`` with overlaps removed.

    Bar ends on the frame lines ``x = pi(v1)`` and ``x = pi(v2)`` are
    pushed out to the enclosing rectangle.  Each horizontal bar loses
    the vertical bars of its tree-1 and tree-2 parents (the top vertex's
    bar is exempt, it caps the outer vertical bars instead); each
    vertical bar loses its own horizontal bar and its tree-3 parent's.
    """
    lam = _check_lambda(lam)
    half = lam / 2
    sk = t.skeleton
    n = sk.n
    v1, v2, vn = sk.realizer.roots
    lo, hi = sk.pi[v1], sk.pi[v2]
    frame = _frame(n, half)
    p1, p2, p3 = (sk.realizer.parents(k) for k in (1, 2, 3))

    def widen(x0, x1):
        return (x0 - half if x0 == lo else x0, x1 + half if x1 == hi else x1)

    H = {}
    for v, (x0, x1, y) in t.h.items():
        a, z = widen(x0, x1)
        H[v] = Rect(a, y - half, z, y + half).clip(frame)
    B = {v: Rect(x - half, y0, x + half, y1).clip(frame) for v, (x, y0, y1) in t.b.items()}
    for v in range(n):
        if v == vn:
            continue
        for p in (p1.get(v), p2.get(v)):
            if p is not None:
                H[v] = H[v].minus(B[p])
    for v in range(n):
        B[v] = B[v].minus(H[v])
        if v in p3:
            B[v] = B[v].minus(H[p3[v]])
    return H, B


def holes(rects: Sequence[Rect], frame: Rect) -> list[Rect]:
    """Uncovered parts of ``frame``, each of which must be a rectangle.

    Horizontal slabs are swept bottom-up; a free interval continues a hole
    when the slab below has the same interval, and a partial overlap means
    the hole is not rectangular.
    """
    rects = [r for r in rects if not r.empty]
    ys = sorted({frame.y0, frame.y1} | {c for r in rects for c in (r.y0, r.y1)})
    out = []
    open_: dict[tuple, Number] = {}
    for j in range(len(ys) - 1):
        y0, y1 = ys[j], ys[j + 1]
        spans = sorted((r.x0, r.x1) for r in rects if r.y0 <= y0 and r.y1 >= y1)
        free = []
        x = frame.x0
        for a, z in spans:
            if a > x:
                free.append((x, a))
            x = max(x, z)
        if x < frame.x1:
            free.append((x, frame.x1))
        nxt = {}
        for iv in free:
            if iv in open_:
                nxt[iv] = open_.pop(iv)
            else:
                nxt[iv] = y0
        for (a, z), start in open_.items():
            out.append(Rect(a, start, z, y0))
        for iv in free:
            if nxt[iv] == y0 and any(a < iv[1] and iv[0] < z for a, z in open_):
                raise GeometryError("hole is not a rectangle")
        open_ = nxt
    for (a, z), start in open_.items():
        out.append(Rect(a, start, z, frame.y1))
    return sorted(out, key=lambda r: (r.y0, r.x0))


def assign_holes(H: dict[int, Rect], hs: Sequence[Rect], columns: dict[int, Number]) -> dict[int, dict[str, Rect]]:
    """Give each hole to the horizontal bar directly below it, as ``L`` or ``R``."""
    out: dict[int, dict[str, Rect]] = {}
    for r in hs:
        owner = [v for v, q in H.items() if q.y1 == r.y0 and q.x0 <= r.x0 and r.x1 <= q.x1 and not q.empty]
        if len(owner) != 1:
            raise GeometryError(f"hole {r} has no unique bar below it")
        v = owner[0]
        side = "L" if r.x1 <= columns[v] else "R"
        if side in out.setdefault(v, {}):
            raise GeometryError(f"vertex {v} receives two {side} holes")
        out[v][side] = r
    return out


def fatten_and_fill(t: TContactRep, lam: Number = DEFAULT_LAMBDA) -> Layout:
    lam = _check_lambda(lam)
    sk = t.skeleton
    n = sk.n
    H, B = fattened_bars(t, lam)
    frame = _frame(n, lam / 2)
    hs = holes(list(H.values()) + list(B.values()), frame)
    extra = assign_holes(H, hs, sk.pi)
    polys = {}
    for v in range(n):
        parts = [H[v], B[v]] + list(extra.get(v, {}).values())
        polys[v] = union_polygon(parts)
    return _layout(sk, polys, lam)


def build_octagons(g: PlaneTriangulation, lam: Number = DEFAULT_LAMBDA) -> Layout:
    return octagons_direct(skeleton(g), lam)


# -- subdivision and area-universality ------------------------------------------


@dataclass(frozen=True)
class RectSubdivision:
    """Per vertex its named rectangles (``H``, ``B``, ``L``, ``R``; empty ones omitted)."""

    rects: tuple[dict[str, Rect], ...]
    bbox: Rect

    def all_rects(self) -> list[tuple[int, str, Rect]]:
        return [(v, k, r) for v, d in enumerate(self.rects) for k, r in d.items()]


def subdivide(o: Layout) -> RectSubdivision:
    """Cut each polygon into its horizontal bar, vertical bar and the two side pieces."""
    if o.lam is None or o.columns is None:
        raise GeometryError("layout carries no bar data")
    lam = o.lam
    half = lam / 2
    out = []
    for v, poly in enumerate(o.polygons):
        c = o.columns[v]
        xs = [p[0] for p in poly]
        ys = [p[1] for p in poly]
        x0, x1, y0, top = min(xs), max(xs), min(ys), max(ys)
        mid = y0 + lam
        parts = {"H": Rect(x0, y0, x1, min(mid, top))}
        parts["B"] = Rect(max(c - half, x0), mid, min(c + half, x1), top)
        if x0 < c - half:
            yl = max(p[1] for p in poly if p[0] == x0)
            parts["L"] = Rect(x0, mid, c - half, yl)
        if x1 > c + half:
            yr = max(p[1] for p in poly if p[0] == x1)
            parts["R"] = Rect(c + half, mid, x1, yr)
        parts = {k: r for k, r in parts.items() if not r.empty}
        if sum(r.area for r in parts.values()) != polygon_area(poly) or union_polygon(parts.values()) != poly:
            raise GeometryError(f"polygon of vertex {v} does not split into bars")
        out.append(parts)
    return RectSubdivision(tuple(out), o.bbox)


@dataclass(frozen=True)
class MaximalSegment:
    """Maximal run of inner rectangle sides on one line.

    ``axis`` is ``"h"`` (constant y) or ``"v"`` (constant x).  ``low`` and
    ``high`` hold the positions where perpendicular sides attach to the
    interior from below/left and from above/right.
    """

    axis: str
    coord: Number
    lo: Number
    hi: Number
    low: tuple[Number, ...]
    high: tuple[Number, ...]

    @property
    def one_sided(self) -> bool:
        return not (self.low and self.high)

    @property
    def length(self) -> Number:
        return self.hi - self.lo


def _merge(intervals: list[tuple[Number, Number]]) -> list[tuple[Number, Number]]:
    out: list[list] = []
    for a, z in sorted(intervals):
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], z)
        else:
            out.append([a, z])
    return [tuple(iv) for iv in out]


def maximal_segments(rects: Sequence[Rect] | RectSubdivision, bbox: Rect | None = None) -> list[MaximalSegment]:
    if isinstance(rects, RectSubdivision):
        bbox = rects.bbox
        rects = [r for _, _, r in rects.all_rects()]
    rects = [r for r in rects if not r.empty]
    if bbox is None:
        bbox = Rect(min(r.x0 for r in rects), min(r.y0 for r in rects), max(r.x1 for r in rects), max(r.y1 for r in rects))
    segs = []
    for axis in ("h", "v"):
        # (coord, lo, hi, side): side 0 = rect lies below/left of the line
        lines: dict[Number, list[tuple[Number, Number, int]]] = {}
        for r in rects:
            if axis == "h":
                sides = ((r.y1, r.x0, r.x1, 0), (r.y0, r.x0, r.x1, 1))
                outer = (bbox.y0, bbox.y1)
            else:
                sides = ((r.x1, r.y0, r.y1, 0), (r.x0, r.y0, r.y1, 1))
                outer = (bbox.x0, bbox.x1)
            for coord, a, z, side in sides:
                if coord not in outer:
                    lines.setdefault(coord, []).append((a, z, side))
        for coord in sorted(lines):
            items = lines[coord]
            for lo, hi in _merge([(a, z) for a, z, _ in items]):
                low, high = set(), set()
                for a, z, side in items:
                    for p in (a, z):
                        if lo < p < hi:
                            (low if side == 0 else high).add(p)
                segs.append(MaximalSegment(axis, coord, lo, hi, tuple(sorted(low)), tuple(sorted(high))))
    return segs


def is_area_universal(r: RectSubdivision | Sequence[Rect], bbox: Rect | None = None) -> bool:
    """Every maximal segment is one-sided."""
    return all(s.one_sided for s in maximal_segments(r, bbox))
