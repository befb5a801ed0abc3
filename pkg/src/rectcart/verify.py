"""Construction-blind checks of a layout from its coordinates alone."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import math

import numpy as np

from .geometry import GeometryError, Layout, Number, Point, Rect, is_rectilinear, polygon_area, polygon_rects, simplify
from .graph import PlaneTriangulation, edge_key

SIDES = ("bottom", "right", "top", "left")


def _exact(layout: Layout) -> bool:
    return all(isinstance(c, (Fraction, int)) for p in layout.polygons for q in p for c in q)


def integral(layout: Layout) -> tuple[Layout, int]:
    """Scale a rational layout to integer coordinates; floats pass through with scale 1."""
    if not _exact(layout):
        return layout, 1
    b = layout.bbox
    scale = math.lcm(
        *(Fraction(c).denominator for p in layout.polygons for q in p for c in q),
        *(Fraction(c).denominator for c in b.as_tuple()),
    )
    conv = lambda c: int(c * scale)  # noqa: E731
    polys = tuple(tuple((conv(x), conv(y)) for x, y in p) for p in layout.polygons)
    box = Rect(*(conv(c) for c in b.as_tuple()))
    return Layout(polys, box, layout.labels), scale


def tolerance(layout: Layout) -> float:
    """Zero for rational layouts, ``1e-9 * min(W, H)`` otherwise."""
    if _exact(layout):
        return 0
    b = layout.bbox
    return 1e-9 * float(min(b.x1 - b.x0, b.y1 - b.y0))


def _ccw(poly: Sequence[Point]) -> list[Point]:
    return list(poly) if polygon_area(poly) > 0 else list(reversed(poly))


def _cluster(values: Iterable[Number], tol: float) -> dict[Number, Number]:
    """Map each value to the smallest value within ``tol`` of a chain of neighbours."""
    out = {}
    rep = None
    last = None
    for v in sorted(set(values)):
        if last is None or v - last > tol:
            rep = v
        out[v] = rep
        last = v
    return out


@dataclass(frozen=True)
class ContactReport:
    adjacency: dict[tuple[int, int], Number]
    sides: dict[tuple[int, int], frozenset[str]]
    missing: frozenset[tuple[int, int]] = frozenset()
    spurious: frozenset[tuple[int, int]] = frozenset()

    @property
    def ok(self) -> bool:
        return not self.missing and not self.spurious


def contact_graph(layout: Layout, reference: PlaneTriangulation | None = None) -> ContactReport:
    """Pairs of polygons sharing boundary of positive length.

    ``sides[(i, j)]`` records on which sides of polygon ``i`` polygon ``j``
    lies.  Corner touches are not contacts.
    """
    layout, scale = integral(layout)
    tol = tolerance(layout)
    edges = []
    for v, poly in enumerate(layout.polygons):
        if not poly:
            continue
        pts = _ccw(poly)
        if not is_rectilinear(pts):
            raise GeometryError(f"polygon {v} is not rectilinear")
        k = len(pts)
        for t in range(k):
            (xa, ya), (xb, yb) = pts[t], pts[(t + 1) % k]
            if ya == yb and xa != xb:
                # +x edge is a bottom side (interior above), -x a top side
                edges.append(("h", ya, min(xa, xb), max(xa, xb), v, "bottom" if xb > xa else "top"))
            elif xa == xb and ya != yb:
                edges.append(("v", xa, min(ya, yb), max(ya, yb), v, "right" if yb > ya else "left"))
    maps = {a: _cluster((e[1] for e in edges if e[0] == a), tol) for a in ("h", "v")}
    groups: dict[tuple[str, Number], list] = {}
    for e in edges:
        groups.setdefault((e[0], maps[e[0]][e[1]]), []).append(e)
    adjacency: dict[tuple[int, int], Number] = {}
    sides: dict[tuple[int, int], set[str]] = {}
    for items in groups.values():
        items.sort(key=lambda e: e[2])
        for a in range(len(items)):
            ea = items[a]
            for b in range(a + 1, len(items)):
                eb = items[b]
                if eb[2] >= ea[3]:
                    break
                if ea[4] == eb[4] or ea[5] == eb[5]:
                    continue
                length = min(ea[3], eb[3]) - max(ea[2], eb[2])
                if length <= tol:
                    continue
                key = edge_key(ea[4], eb[4])
                adjacency[key] = adjacency.get(key, 0) + length
                sides.setdefault((ea[4], eb[4]), set()).add(ea[5])
                sides.setdefault((eb[4], ea[4]), set()).add(eb[5])
    if scale != 1:
        adjacency = {k: Fraction(v, scale) for k, v in adjacency.items()}
    frozen = {k: frozenset(v) for k, v in sides.items()}
    if reference is None:
        return ContactReport(adjacency, frozen)
    want = set(reference.edge_set)
    have = set(adjacency)
    return ContactReport(adjacency, frozen, frozenset(want - have), frozenset(have - want))


def polygon_complexity(layout: Layout) -> list[int]:
    """Side count per polygon after merging collinear edges."""
    out = []
    for v, poly in enumerate(layout.polygons):
        if not is_rectilinear(poly):
            raise GeometryError(f"polygon {v} is not rectilinear")
        out.append(len(simplify(poly)))
    return out


def coverage(layout: Layout) -> np.ndarray:
    """How many polygons cover each cell of the compressed bounding-box grid."""
    layout = integral(layout)[0]
    tol = tolerance(layout)
    b = layout.bbox
    rects = [r for p in layout.polygons if p for r in polygon_rects(_ccw(p))]
    xmap = _cluster([b.x0, b.x1] + [c for r in rects for c in (r.x0, r.x1)], tol)
    ymap = _cluster([b.y0, b.y1] + [c for r in rects for c in (r.y0, r.y1)], tol)
    xs = sorted(set(xmap.values()))
    ys = sorted(set(ymap.values()))
    xi = {x: k for k, x in enumerate(xs)}
    yi = {y: k for k, y in enumerate(ys)}
    grid = np.zeros((len(xs) + 1, len(ys) + 1), dtype=np.int64)
    for r in rects:
        i0, i1 = xi[xmap[r.x0]], xi[xmap[r.x1]]
        j0, j1 = yi[ymap[r.y0]], yi[ymap[r.y1]]
        if i0 == i1 or j0 == j1:
            continue
        grid[i0, j0] += 1
        grid[i1, j0] -= 1
        grid[i0, j1] -= 1
        grid[i1, j1] += 1
    cov = grid.cumsum(0).cumsum(1)
    i0, i1 = xi[xmap[b.x0]], xi[xmap[b.x1]]
    j0, j1 = yi[ymap[b.y0]], yi[ymap[b.y1]]
    inside = cov[i0:i1, j0:j1]
    outside = cov.sum() - inside.sum()
    if outside:
        raise GeometryError("a polygon leaves the bounding box")
    return inside


def interiors_disjoint(layout: Layout) -> bool:
    return int(coverage(layout).max(initial=0)) <= 1


def holes_free(layout: Layout) -> bool:
    """Polygons tile the bounding box: total area matches and every cell is covered once."""
    layout = integral(layout)[0]
    b = layout.bbox
    total = sum(polygon_area(_ccw(p)) for p in layout.polygons if p)
    box = (b.x1 - b.x0) * (b.y1 - b.y0)
    tol = tolerance(layout)
    if tol == 0:
        if total != box:
            return False
    elif abs(total - box) > tol * float(max(b.x1 - b.x0, b.y1 - b.y0)):
        return False
    try:
        cov = coverage(layout)
    except GeometryError:
        return False
    return bool(np.all(cov == 1))


def combinatorial_equiv(a: Layout, b: Layout) -> bool:
    """Same contacts, and each contact on the same sides of both polygons."""
    if a.n != b.n:
        return False
    ca, cb = contact_graph(a), contact_graph(b)
    return set(ca.adjacency) == set(cb.adjacency) and ca.sides == cb.sides


@dataclass(frozen=True)
class VerifyReport:
    contacts: ContactReport
    complexity: list[int]
    holes_free: bool
    disjoint: bool
    max_sides: int = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "max_sides", max(self.complexity, default=0))

    def ok(self, bound: int = 8) -> bool:
        return self.contacts.ok and self.holes_free and self.disjoint and self.max_sides <= bound

    def as_dict(self, labels: Sequence[str], bound: int = 8) -> dict:
        name = lambda e: [labels[e[0]], labels[e[1]]]  # noqa: E731
        return {
            "ok": self.ok(bound),
            "contacts": len(self.contacts.adjacency),
            "missing": sorted(name(e) for e in self.contacts.missing),
            "spurious": sorted(name(e) for e in self.contacts.spurious),
            "max_sides": self.max_sides,
            "side_bound": bound,
            "holes_free": self.holes_free,
            "interiors_disjoint": self.disjoint,
        }


def verify_layout(layout: Layout, g: PlaneTriangulation) -> VerifyReport:
    layout = integral(layout)[0]
    try:
        disjoint = interiors_disjoint(layout)
    except GeometryError:
        disjoint = False
    return VerifyReport(contact_graph(layout, g), polygon_complexity(layout), holes_free(layout), disjoint)
