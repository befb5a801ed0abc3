"""Instance generators: fixtures, seeded random triangulations, small-n enumeration."""

from __future__ import annotations

import random
from collections import deque
from typing import Iterator

from .graph import InstanceError, PlaneTriangulation, from_edges_faces

Face = tuple[int, int, int]


def triangle() -> PlaneTriangulation:
    return from_edges_faces(3, [(0, 2, 1), (0, 1, 2)], (0, 1, 2)).relabel(["u", "v", "w"])


def k4() -> PlaneTriangulation:
    """K4 with outer walk (u, v, w) and inner vertex c."""
    faces = [(0, 1, 2), (1, 0, 3), (2, 1, 3), (0, 2, 3)]
    return from_edges_faces(4, faces, (0, 1, 2)).relabel(["u", "v", "w", "c"])


def octahedron() -> PlaneTriangulation:
    # poles 0 (outer side) and 5; equator 1..4
    faces = []
    eq = [1, 2, 3, 4]
    for k in range(4):
        a, b = eq[k], eq[(k + 1) % 4]
        faces.append((0, a, b))
        faces.append((5, b, a))
    g = from_edges_faces(6, faces, faces[0])
    return g


def _rotate_face(f: tuple[int, ...], start: int) -> tuple[int, ...]:
    k = f.index(start)
    return f[k:] + f[:k]


class _FaceSet:
    """Mutable sphere triangulation as a dart -> face map."""

    def __init__(self, faces: list[Face]):
        self.face_of: dict[tuple[int, int], Face] = {}
        self.faces: set[Face] = set()
        for f in faces:
            self.add(f)

    def add(self, f: Face) -> None:
        self.faces.add(f)
        for k in range(3):
            self.face_of[(f[k], f[(k + 1) % 3])] = f

    def remove(self, f: Face) -> None:
        self.faces.discard(f)
        for k in range(3):
            del self.face_of[(f[k], f[(k + 1) % 3])]

    def insert(self, f: Face, x: int) -> None:
        a, b, c = f
        self.remove(f)
        self.add((a, b, x))
        self.add((b, c, x))
        self.add((c, a, x))

    def flip(self, a: int, b: int, degree: dict[int, int], adjacent) -> bool:
        f1 = self.face_of[(a, b)]
        f2 = self.face_of[(b, a)]
        c = _rotate_face(f1, a)[2]
        d = _rotate_face(f2, b)[2]
        if c == d or adjacent(c, d) or degree[a] <= 3 or degree[b] <= 3:
            return False
        self.remove(f1)
        self.remove(f2)
        self.add((a, d, c))
        self.add((d, b, c))
        degree[a] -= 1
        degree[b] -= 1
        degree[c] += 1
        degree[d] += 1
        return True


def gen_random_triangulation(n: int, seed: int | None = None, flips: int | None = None) -> PlaneTriangulation:
    """Random maximal plane graph with outer face ``(0, 1, 2)``.

    Vertices are inserted into uniformly chosen inner faces, then random
    diagonal flips (``n`` attempts by default) not touching the outer face
    mix the degree distribution.
    """
    if n < 3:
        raise InstanceError("n >= 3 required")
    rng = random.Random(seed)
    outer: Face = (0, 1, 2)
    fs = _FaceSet([outer, (0, 2, 1)])
    inner = [(0, 2, 1)]
    degree = {0: 2, 1: 2, 2: 2}
    for x in range(3, n):
        k = rng.randrange(len(inner))
        f = inner[k]
        fs.insert(f, x)
        a, b, c = f
        inner[k] = (a, b, x)
        inner.append((b, c, x))
        inner.append((c, a, x))
        degree[x] = 3
        for v in f:
            degree[v] += 1
    if n > 4:
        outer_edges = {(0, 1), (1, 2), (2, 0), (1, 0), (2, 1), (0, 2)}
        edges = sorted({(min(d), max(d)) for d in fs.face_of})
        edges = [e for e in edges if e not in outer_edges]
        for _ in range(n if flips is None else flips):
            k = rng.randrange(len(edges))
            a, b = edges[k]
            f1 = fs.face_of[(a, b)]
            c = _rotate_face(f1, a)[2]
            d = _rotate_face(fs.face_of[(b, a)], b)[2]
            if fs.flip(a, b, degree, lambda x, y: (x, y) in fs.face_of):
                edges[k] = (c, d)
    faces = sorted(fs.faces)
    return from_edges_faces(n, faces, outer)


def random_weights(n: int, seed: int | None = None, lo: float = 10.0, hi: float = 100.0) -> list[float]:
    rng = random.Random(seed)
    return [rng.uniform(lo, hi) for _ in range(n)]


def double_fan(n: int) -> PlaneTriangulation:
    """Two apexes joined to every vertex of a path, plus the apex edge.

    Vertices 0 and ``n - 1`` are the apexes and ``1..n-2`` the path.  The
    Hamiltonian cycle ``0, 1, ..., n-1`` has its closing edge on the
    outer face ``{0, n-1, n-2}``.
    """
    if n < 4:
        raise InstanceError("double fan needs n >= 4")
    a, b = 0, n - 1
    tris = [(a, b, 1), (a, b, n - 2)]
    for p in range(1, n - 2):
        tris.append((a, p, p + 1))
        tris.append((b, p, p + 1))
    g = from_triangles(n, tris)
    return g.with_outer(*_oriented(g, (a, b, n - 2)))


def from_triangles(n: int, triangles: list[tuple[int, int, int]]) -> PlaneTriangulation:
    """Sphere triangulation from unoriented triangles (orientation fixed by the first)."""
    by_edge: dict[frozenset, list[int]] = {}
    for k, t in enumerate(triangles):
        for e in ((t[0], t[1]), (t[1], t[2]), (t[2], t[0])):
            by_edge.setdefault(frozenset(e), []).append(k)
    oriented: dict[int, tuple[int, int, int]] = {0: tuple(triangles[0])}
    stack = [0]
    while stack:
        k = stack.pop()
        t = oriented[k]
        for i in range(3):
            x, y = t[i], t[(i + 1) % 3]
            for j in by_edge[frozenset((x, y))]:
                if j in oriented:
                    continue
                u = triangles[j]
                z = next(v for v in u if v not in (x, y))
                oriented[j] = (y, x, z)
                stack.append(j)
    if len(oriented) != len(triangles):
        raise InstanceError("triangles do not form a connected surface")
    faces = [oriented[k] for k in range(len(triangles))]
    return from_edges_faces(n, faces, faces[0])


def _oriented(g: PlaneTriangulation, tri: tuple[int, int, int]) -> tuple[int, int, int]:
    a, b, c = tri
    return (a, b, c) if g.face_of(a, b) == [a, b, c] else (b, a, c)


def random_outerplanar(n: int, seed: int | None = None) -> PlaneTriangulation:
    """Random maximal outer-planar graph; outer walk ``0, 1, ..., n-1``."""
    if n < 3:
        raise InstanceError("n >= 3 required")
    rng = random.Random(seed)
    poly = list(range(n))
    faces = []
    while len(poly) > 3:
        k = rng.randrange(len(poly))
        p, i, q = poly[k - 1], poly[k], poly[(k + 1) % len(poly)]
        faces.append((i, p, q))
        del poly[k]
    a, b, c = poly
    faces.append((a, c, b))
    outer = tuple(range(n))
    return from_edges_faces(n, faces + [outer], outer)


def fan_outerplanar(n: int) -> PlaneTriangulation:
    """Fan: vertex 0 joined to all others along the outer path."""
    faces = [(i, 0, i + 1) for i in range(1, n - 1)]
    outer = tuple(range(n))
    return from_edges_faces(n, faces + [outer], outer)


# -- small-n exhaustive enumeration ------------------------------------------------


def canonical_code(rotation: tuple[tuple[int, ...], ...]) -> tuple[int, ...]:
    """Isomorphism invariant of a connected sphere embedding, mirror images identified."""
    best = None
    n = len(rotation)
    for mirror in (False, True):
        rot = [tuple(reversed(r)) if mirror else r for r in rotation]
        pos = [{u: k for k, u in enumerate(r)} for r in rot]
        for a in range(n):
            for b in rot[a]:
                num = {a: 0}
                ref = {a: b}
                queue = deque([a])
                code = []
                while queue:
                    v = queue.popleft()
                    r = rot[v]
                    s = pos[v][ref[v]]
                    for t in range(len(r)):
                        u = r[(s + t) % len(r)]
                        if u not in num:
                            num[u] = len(num)
                            ref[u] = v
                            queue.append(u)
                        code.append(num[u])
                    code.append(n)
                    if best is not None and len(code) <= len(best) and tuple(code) > best[: len(code)]:
                        break
                else:
                    c = tuple(code)
                    if best is None or c < best:
                        best = c
                    continue
    return best


def enumerate_triangulations(n: int) -> list[PlaneTriangulation]:
    """All maximal planar graphs on ``n`` vertices up to isomorphism (small n)."""
    if n < 3:
        return []
    if n == 3:
        return [triangle()]
    start = gen_random_triangulation(n, seed=0, flips=0)
    seen = {canonical_code(start.rotation): start}
    todo = [start]
    while todo:
        g = todo.pop()
        for a, b in g.edges():
            h = _flip(g, a, b)
            if h is None:
                continue
            code = canonical_code(h.rotation)
            if code not in seen:
                seen[code] = h
                todo.append(h)
    return [seen[c] for c in sorted(seen)]


def _flip(g: PlaneTriangulation, a: int, b: int) -> PlaneTriangulation | None:
    faces = [tuple(f) for f in g.faces]
    f1 = tuple(g.face_of(a, b))
    f2 = tuple(g.face_of(b, a))
    c = f1[2]
    d = f2[2]
    if c == d or g.has_edge(c, d) or len(g.rotation[a]) <= 3 or len(g.rotation[b]) <= 3:
        return None
    new = [f for f in faces if set(f) != set(f1) and set(f) != set(f2)]
    new += [(a, d, c), (d, b, c)]
    h = from_edges_faces(g.n, new, new[0])
    return h.with_outer(*h.faces[0])


def all_triangulations_upto(n_max: int) -> Iterator[PlaneTriangulation]:
    for n in range(3, n_max + 1):
        yield from enumerate_triangulations(n)
