"""Axis-aligned rectangles and rectilinear polygons in exact or float arithmetic."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

Number = Fraction | float | int
Point = tuple[Number, Number]
Polygon = tuple[Point, ...]


class GeometryError(ValueError):
    """Raised when a shape is not of the expected form."""


@dataclass(frozen=True)
class Rect:
    x0: Number
    y0: Number
    x1: Number
    y1: Number

    @property
    def width(self) -> Number:
        return self.x1 - self.x0

    @property
    def height(self) -> Number:
        return self.y1 - self.y0

    @property
    def area(self) -> Number:
        return self.width * self.height

    @property
    def empty(self) -> bool:
        return self.x1 <= self.x0 or self.y1 <= self.y0

    def intersects(self, o: "Rect") -> bool:
        """Positive-area overlap."""
        return min(self.x1, o.x1) > max(self.x0, o.x0) and min(self.y1, o.y1) > max(self.y0, o.y0)

    def minus(self, o: "Rect") -> "Rect":
        """Difference that must again be a rectangle (``o`` covers a full side band)."""
        if not self.intersects(o):
            return self
        x0, y0, x1, y1 = self.x0, self.y0, self.x1, self.y1
        if o.y0 <= y0 and o.y1 >= y1:
            if o.x0 <= x0:
                x0 = max(x0, o.x1)
            elif o.x1 >= x1:
                x1 = min(x1, o.x0)
            else:
                raise GeometryError("difference splits the rectangle")
        elif o.x0 <= x0 and o.x1 >= x1:
            if o.y0 <= y0:
                y0 = max(y0, o.y1)
            elif o.y1 >= y1:
                y1 = min(y1, o.y0)
            else:
                raise GeometryError("difference splits the rectangle")
        else:
            raise GeometryError("difference is not a rectangle")
        return Rect(x0, y0, x1, y1)

    def clip(self, o: "Rect") -> "Rect":
        return Rect(max(self.x0, o.x0), max(self.y0, o.y0), min(self.x1, o.x1), min(self.y1, o.y1))

    def corners(self) -> Polygon:
        return ((self.x0, self.y0), (self.x1, self.y0), (self.x1, self.y1), (self.x0, self.y1))

    def as_tuple(self) -> tuple[Number, Number, Number, Number]:
        return (self.x0, self.y0, self.x1, self.y1)


def polygon_area(poly: Sequence[Point]) -> Number:
    """Signed shoelace area (positive for counter-clockwise)."""
    s = 0
    k = len(poly)
    for t in range(k):
        x0, y0 = poly[t]
        x1, y1 = poly[(t + 1) % k]
        s += x0 * y1 - x1 * y0
    return Fraction(s, 2) if isinstance(s, int) else s / 2


def simplify(poly: Sequence[Point]) -> Polygon:
    """Drop repeated points and merge collinear consecutive edges."""
    pts = []
    for p in poly:
        if not pts or pts[-1] != p:
            pts.append(p)
    if len(pts) > 1 and pts[0] == pts[-1]:
        pts.pop()
    changed = True
    while changed and len(pts) >= 3:
        changed = False
        k = len(pts)
        for t in range(k):
            a, b, c = pts[t - 1], pts[t], pts[(t + 1) % k]
            if (a[0] == b[0] == c[0]) or (a[1] == b[1] == c[1]) or a == b:
                del pts[t]
                changed = True
                break
    return normalize(pts)


def normalize(poly: Sequence[Point]) -> Polygon:
    """Rotate a polygon so it starts at its lowest, then leftmost vertex."""
    if not poly:
        return ()
    k = min(range(len(poly)), key=lambda t: (poly[t][1], poly[t][0]))
    return tuple(poly[k:]) + tuple(poly[:k])


def is_rectilinear(poly: Sequence[Point]) -> bool:
    k = len(poly)
    return all(
        poly[t][0] == poly[(t + 1) % k][0] or poly[t][1] == poly[(t + 1) % k][1] for t in range(k)
    )


def side_count(poly: Sequence[Point]) -> int:
    return len(simplify(poly))


def union_polygon(rects: Iterable[Rect]) -> Polygon:
    """Boundary of a union of rectangles as one counter-clockwise polygon.

    Raises when the union is empty, disconnected, has a hole, or touches
    itself at a point.
    """
    rects = [r for r in rects if not r.empty]
    if not rects:
        raise GeometryError("empty union")
    xs = sorted({c for r in rects for c in (r.x0, r.x1)})
    ys = sorted({c for r in rects for c in (r.y0, r.y1)})
    xi = {x: k for k, x in enumerate(xs)}
    yi = {y: k for k, y in enumerate(ys)}
    cov = set()
    for r in rects:
        for i in range(xi[r.x0], xi[r.x1]):
            for j in range(yi[r.y0], yi[r.y1]):
                cov.add((i, j))
    nxt: dict[Point, Point] = {}

    def edge(p, q):
        if p in nxt:
            raise GeometryError("union boundary touches itself")
        nxt[p] = q

    for i, j in cov:
        x0, x1, y0, y1 = xs[i], xs[i + 1], ys[j], ys[j + 1]
        if (i, j - 1) not in cov:
            edge((x0, y0), (x1, y0))
        if (i + 1, j) not in cov:
            edge((x1, y0), (x1, y1))
        if (i, j + 1) not in cov:
            edge((x1, y1), (x0, y1))
        if (i - 1, j) not in cov:
            edge((x0, y1), (x0, y0))
    start = min(nxt, key=lambda p: (p[1], p[0]))
    loop = [start]
    p = nxt[start]
    while p != start:
        loop.append(p)
        p = nxt[p]
        if len(loop) > len(nxt):
            raise GeometryError("boundary does not close")
    if len(loop) != len(nxt):
        raise GeometryError("union is not a simple polygon")
    return simplify(loop)


def polygon_rects(poly: Sequence[Point]) -> list[Rect]:
    """Decompose a simple rectilinear polygon into horizontal slabs."""
    ys = sorted({p[1] for p in poly})
    k = len(poly)
    verticals = []
    for t in range(k):
        (xa, ya), (xb, yb) = poly[t], poly[(t + 1) % k]
        if xa == xb and ya != yb:
            verticals.append((xa, min(ya, yb), max(ya, yb)))
    out = []
    for j in range(len(ys) - 1):
        y0, y1 = ys[j], ys[j + 1]
        xs = sorted(x for x, lo, hi in verticals if lo <= y0 and hi >= y1)
        for t in range(0, len(xs) - 1, 2):
            out.append(Rect(xs[t], y0, xs[t + 1], y1))
    return out


def bbox_of(points: Iterable[Point]) -> Rect:
    pts = list(points)
    return Rect(min(p[0] for p in pts), min(p[1] for p in pts), max(p[0] for p in pts), max(p[1] for p in pts))


def fmt_number(x: Number) -> str | float:
    """Rationals as ``"p/q"`` strings, floats unchanged."""
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, int):
        return f"{x}/1"
    return float(x)


def parse_number(x) -> Number:
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, int):
        return Fraction(x)
    return float(x)


@dataclass(frozen=True)
class Layout:
    """One rectilinear polygon per vertex inside a bounding rectangle.

    ``columns`` holds the x-centre of each vertex's vertical bar for
    layouts built from T-shapes; ``parts`` optionally names the
    rectangles a polygon is made of; ``auxiliary`` lists vertices added
    only to make the input maximal.
    """

    polygons: tuple[Polygon, ...]
    bbox: Rect
    labels: tuple[str, ...]
    lam: Number | None = None
    columns: tuple[Number, ...] | None = None
    parts: tuple[dict[str, Rect], ...] | None = None
    auxiliary: tuple[int, ...] = ()

    @property
    def n(self) -> int:
        return len(self.polygons)

    def areas(self) -> list[Number]:
        return [polygon_area(p) for p in self.polygons]
