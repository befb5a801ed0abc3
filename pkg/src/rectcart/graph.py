"""Combinatorial plane graphs given by rotation systems.

A graph on vertices ``0..n-1`` is stored as a rotation system: for every
vertex the list of its neighbours in clockwise order.  The outer face is
given as a closed walk ``outer`` in the direction produced by
:meth:`PlaneTriangulation.next_dart`, which for clockwise rotations walks
the outer face clockwise.  For a maximal graph ``outer`` is the triple
``(u, v, w)``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence


class InstanceError(ValueError):
    """Raised for malformed or inconsistent instance data."""


Dart = tuple[int, int]
Edge = tuple[int, int]


def edge_key(a: int, b: int) -> Edge:
    return (a, b) if a < b else (b, a)


@dataclass(frozen=True)
class PlaneTriangulation:
    """Plane graph with a clockwise rotation system and a designated outer face."""

    rotation: tuple[tuple[int, ...], ...]
    outer: tuple[int, ...]
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if not self.labels:
            object.__setattr__(self, "labels", tuple(str(i) for i in range(len(self.rotation))))

    @property
    def n(self) -> int:
        return len(self.rotation)

    @cached_property
    def _pos(self) -> list[dict[int, int]]:
        return [{u: k for k, u in enumerate(nbrs)} for nbrs in self.rotation]

    @cached_property
    def m(self) -> int:
        return sum(len(r) for r in self.rotation) // 2

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(edge_key(v, u) for v, nbrs in enumerate(self.rotation) for u in nbrs)

    def edges(self) -> list[Edge]:
        return sorted(self.edge_set)

    def has_edge(self, a: int, b: int) -> bool:
        return b in self._pos[a]

    def succ(self, v: int, u: int) -> int:
        """Neighbour following ``u`` clockwise around ``v``."""
        r = self.rotation[v]
        return r[(self._pos[v][u] + 1) % len(r)]

    def pred(self, v: int, u: int) -> int:
        """Neighbour preceding ``u`` clockwise around ``v``."""
        r = self.rotation[v]
        return r[(self._pos[v][u] - 1) % len(r)]

    def next_dart(self, a: int, b: int) -> Dart:
        return (b, self.succ(b, a))

    def face_of(self, a: int, b: int) -> list[int]:
        """Vertices of the face walk starting with dart ``a -> b``."""
        walk = [a]
        x, y = self.next_dart(a, b)
        limit = 2 * self.m + 1
        while (x, y) != (a, b):
            walk.append(x)
            x, y = self.next_dart(x, y)
            if len(walk) > limit:
                raise InstanceError("face walk does not close")
        return walk

    @cached_property
    def faces(self) -> list[tuple[int, ...]]:
        seen: set[Dart] = set()
        out = []
        for v, nbrs in enumerate(self.rotation):
            for u in nbrs:
                if (v, u) in seen:
                    continue
                walk = self.face_of(v, u)
                for k in range(len(walk)):
                    seen.add((walk[k], walk[(k + 1) % len(walk)]))
                out.append(tuple(walk))
        return out

    def is_outer_walk(self, walk: Sequence[int]) -> bool:
        if len(walk) < 3 or not self.has_edge(walk[0], walk[1]):
            return False
        return self.face_of(walk[0], walk[1]) == list(walk)

    def mirrored(self) -> "PlaneTriangulation":
        """Reflected embedding; every face walk is reversed."""
        rot = tuple(tuple(reversed(r)) for r in self.rotation)
        outer = (self.outer[0],) + tuple(reversed(self.outer[1:]))
        return PlaneTriangulation(rot, outer, self.labels)

    def with_outer(self, u: int, v: int, w: int) -> "PlaneTriangulation":
        """Same triangulation with the face ``{u, v, w}`` as outer face, walked ``u, v, w``.

        The embedding is mirrored when the face only exists with the
        opposite orientation.
        """
        if self.has_edge(u, v) and self.face_of(u, v) == [u, v, w]:
            return PlaneTriangulation(self.rotation, (u, v, w), self.labels)
        if self.has_edge(v, u) and self.face_of(v, u) == [v, u, w]:
            g = self.mirrored()
            return PlaneTriangulation(g.rotation, (u, v, w), self.labels)
        raise InstanceError(f"{(u, v, w)} is not a face")

    def relabel(self, labels: Sequence[str]) -> "PlaneTriangulation":
        return PlaneTriangulation(self.rotation, self.outer, tuple(labels))

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise InstanceError(f"unknown vertex {label!r}") from None


@dataclass(frozen=True)
class ValidationReport:
    problems: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        # truthy when valid
        return not self.problems

    def __iter__(self):
        return iter(self.problems)


def _rotation_problems(rotation: Sequence[Sequence[int]]) -> list[str]:
    n = len(rotation)
    problems = []
    for v, nbrs in enumerate(rotation):
        if len(set(nbrs)) != len(nbrs):
            problems.append(f"inconsistent rotation: repeated neighbour at {v}")
        for u in nbrs:
            if not 0 <= u < n or u == v:
                problems.append(f"inconsistent rotation: bad neighbour {u} at {v}")
            elif v not in rotation[u]:
                problems.append(f"inconsistent rotation: {v}->{u} has no reverse entry")
    return problems


def validate(g: PlaneTriangulation, maximal: bool = True) -> ValidationReport:
    """List every violated condition; an empty report means ``g`` is valid.

    With ``maximal=False`` only inner triangulation with a simple outer
    face is required.
    """
    problems = _rotation_problems(g.rotation)
    if problems:
        return ValidationReport(tuple(problems))
    n, m = g.n, g.m
    if n < 3:
        return ValidationReport((f"too few vertices: {n}",))
    if maximal and m != 3 * n - 6:
        problems.append(f"m != 3n-6 (m={m}, n={n})")
    try:
        faces = g.faces
    except InstanceError as exc:
        return ValidationReport(tuple(problems + [str(exc)]))
    if n - m + len(faces) != 2:
        problems.append(f"rotation system is not planar (n-m+f = {n - m + len(faces)})")
    outer = tuple(g.outer)
    if len(set(outer)) != len(outer) or len(outer) < 3:
        problems.append("outer face is not a simple cycle")
    elif not g.is_outer_walk(outer):
        problems.append("outer walk is not a face of the rotation system")
    if maximal and len(outer) != 3:
        problems.append("outer face is not a triangle")
    outer_darts = {(outer[k], outer[(k + 1) % len(outer)]) for k in range(len(outer))}
    for f in faces:
        if (f[0], f[1]) in outer_darts:
            continue
        if len(f) != 3:
            problems.append(f"non-triangular face {f}")
    return ValidationReport(tuple(problems))


def is_maximal_outerplanar(g: PlaneTriangulation) -> bool:
    return not validate(g, maximal=False).problems and len(g.outer) == g.n and g.m == 2 * g.n - 3


# -- instances ---------------------------------------------------------------


@dataclass(frozen=True)
class WeightedInstance:
    """Graph with positive weights normalised so that ``W * H == sum(weights)``.

    ``scale`` is the factor applied to the raw weights.
    """

    graph: PlaneTriangulation
    weights: tuple[Fraction, ...]
    frame: tuple[Fraction, Fraction]
    scale: Fraction = Fraction(1)

    @property
    def area(self) -> Fraction:
        return self.frame[0] * self.frame[1]

    @property
    def w_min(self) -> Fraction:
        return min(self.weights)


def make_instance(
    g: PlaneTriangulation,
    weights: Sequence[float | Fraction] | None = None,
    frame: tuple[float, float] | None = None,
) -> WeightedInstance:
    """Normalise ``weights`` (default all 1) to the frame (default square)."""
    raw = [Fraction(1)] * g.n if weights is None else [Fraction(w) for w in weights]
    if len(raw) != g.n:
        raise InstanceError("one weight per vertex required")
    for w in raw:
        if w <= 0:
            raise InstanceError("non-positive weight")
    total = sum(raw)
    if frame is None:
        side = _rational_sqrt(total)
        W, H = side, side
    else:
        W, H = Fraction(frame[0]), Fraction(frame[1])
        if W <= 0 or H <= 0:
            raise InstanceError("frame sides must be positive")
    scale = W * H / total
    return WeightedInstance(g, tuple(w * scale for w in raw), (W, H), scale)


def _rational_sqrt(x: Fraction) -> Fraction:
    r = math.isqrt(x.numerator * x.denominator)
    if r * r == x.numerator * x.denominator:
        return Fraction(r, x.denominator)
    return Fraction(math.sqrt(x)).limit_denominator(1 << 20)


def parse_instance(text: str) -> WeightedInstance:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceError(f"malformed syntax: {exc}") from None
    try:
        ids = [str(v["id"]) for v in data["vertices"]]
        if len(set(ids)) != len(ids):
            raise InstanceError("duplicate vertex id")
        idx = {v: k for k, v in enumerate(ids)}
        rotation = tuple(tuple(idx[str(u)] for u in data["rotation"][v]) for v in ids)
        outer = tuple(idx[str(u)] for u in data["outer"])
        weights = [v.get("weight", 1) for v in data["vertices"]]
        frame = data.get("frame")
    except (KeyError, TypeError) as exc:
        raise InstanceError(f"malformed instance: missing or bad field {exc}") from None
    for w in weights:
        if not isinstance(w, (int, float)) or isinstance(w, bool):
            raise InstanceError(f"weight {w!r} is not a number")
        if w <= 0:
            raise InstanceError("non-positive weight")
    problems = _rotation_problems(rotation)
    if problems:
        raise InstanceError(problems[0])
    g = PlaneTriangulation(rotation, outer, tuple(ids))
    report = validate(g, maximal=len(outer) == 3)
    if report.problems:
        raise InstanceError("; ".join(report.problems))
    return make_instance(g, [Fraction(w) for w in weights], None if frame is None else tuple(frame))


def dump_instance(inst: WeightedInstance | PlaneTriangulation, weights: Sequence[float] | None = None) -> str:
    if isinstance(inst, WeightedInstance):
        g = inst.graph
        ws = [float(w) for w in inst.weights] if weights is None else list(weights)
        frame = [float(inst.frame[0]), float(inst.frame[1])]
    else:
        g, frame = inst, None
        ws = [1.0] * g.n if weights is None else list(weights)
    lab = g.labels
    data = {
        "vertices": [{"id": lab[v], "weight": ws[v]} for v in range(g.n)],
        "rotation": {lab[v]: [lab[u] for u in g.rotation[v]] for v in range(g.n)},
        "outer": [lab[v] for v in g.outer],
    }
    if frame is not None:
        data["frame"] = frame
    return json.dumps(data, indent=1)


def from_edges_faces(n: int, faces: Iterable[Sequence[int]], outer: Sequence[int]) -> PlaneTriangulation:
    """Build a rotation system from consistently oriented face walks.

    Every face (including the outer one) is a walk ``(a, b, c, ...)``
    such that ``next_dart(a, b) == (b, c)``.
    """
    nxt: dict[Dart, int] = {}
    for f in list(faces):
        k = len(f)
        for t in range(k):
            a, b, c = f[t], f[(t + 1) % k], f[(t + 2) % k]
            nxt[(a, b)] = c
    # next_dart(a, b) = (b, succ_b(a)), so succ_b(a) = c
    succ: list[dict[int, int]] = [dict() for _ in range(n)]
    for (a, b), c in nxt.items():
        succ[b][a] = c
    rotation = []
    for v in range(n):
        s = succ[v]
        if not s:
            rotation.append(())
            continue
        start = min(s)
        order = [start]
        while True:
            u = s[order[-1]]
            if u == start:
                break
            order.append(u)
            if len(order) > len(s):
                raise InstanceError(f"inconsistent faces around {v}")
        rotation.append(tuple(order))
    return PlaneTriangulation(tuple(rotation), tuple(outer))


# -- augmentation ------------------------------------------------------------


def augment_to_maximal(g: PlaneTriangulation) -> tuple[PlaneTriangulation, list[int]]:
    """Make an inner-triangulated graph maximal by adding two outer vertices.

    Returns the new graph, whose outer face is ``(a, b, c1)`` with the
    added vertices ``a, b`` usable as ``v1, v2``, and the list ``[a, b]``.
    """
    report = validate(g, maximal=False)
    if report.problems:
        raise InstanceError("; ".join(report.problems))
    if len(g.outer) == 3:
        return g, []
    n = g.n
    cyc = list(g.outer)
    k = len(cyc)
    a, b = n, n + 1
    j = k // 2
    faces = [f for f in g.faces if len(f) == 3]
    # new triangles take over the darts of the old outer walk
    for t in range(j):
        faces.append((cyc[t], cyc[t + 1], a))
    for t in range(j, k):
        faces.append((cyc[t], cyc[(t + 1) % k], b))
    faces.append((a, cyc[j], b))
    outer = (a, b, cyc[0])
    h = from_edges_faces(n + 2, faces + [outer], outer)
    labels = tuple(g.labels) + _fresh_labels(g.labels, 2)
    return PlaneTriangulation(h.rotation, outer, labels), [a, b]


def _fresh_labels(existing: Sequence[str], count: int) -> tuple[str, ...]:
    taken = set(existing)
    out = []
    k = 0
    while len(out) < count:
        cand = f"_aug{k}"
        if cand not in taken:
            out.append(cand)
        k += 1
    return tuple(out)


# -- Hamiltonian cycles --------------------------------------------------------


@dataclass(frozen=True)
class HamiltonianCycle:
    order: tuple[int, ...]

    @cached_property
    def index(self) -> dict[int, int]:
        return {v: k for k, v in enumerate(self.order)}

    def __len__(self) -> int:
        return len(self.order)


def check_cycle(g: PlaneTriangulation, c: HamiltonianCycle | Sequence[int]) -> HamiltonianCycle:
    order = tuple(c.order if isinstance(c, HamiltonianCycle) else c)
    if sorted(order) != list(range(g.n)):
        raise InstanceError("cycle is not a permutation of the vertices")
    for k in range(g.n):
        if not g.has_edge(order[k], order[(k + 1) % g.n]):
            raise InstanceError(f"cycle step {order[k]}-{order[(k + 1) % g.n]} is not an edge")
    return c if isinstance(c, HamiltonianCycle) else HamiltonianCycle(order)


@dataclass(frozen=True)
class LeftRightSplit:
    """Edge sets of the left and right outer-planar graphs (as index pairs)."""

    cycle: HamiltonianCycle
    left: frozenset[Edge]
    right: frozenset[Edge]


def split_left_right(g: PlaneTriangulation, c: HamiltonianCycle | Sequence[int]) -> LeftRightSplit:
    """Split ``g`` along a Hamiltonian cycle ``v1..vn``.

    Chords on the side of the cycle away from the outer face go left,
    the rest right.  Path edges are in both; ``(v1, vn)`` only left.
    """
    c = check_cycle(g, c)
    order = c.order
    n = g.n
    v1, vn = order[0], order[-1]
    if not any({v1, vn} <= set(f) for f in _outer_faces(g)):
        raise InstanceError("(v1, vn) is not an outer edge")
    cyc = {edge_key(order[k], order[k + 1]) for k in range(n - 1)}
    closing = edge_key(v1, vn)
    # dual BFS over faces without crossing cycle edges
    face_id: dict[Dart, int] = {}
    for fi, f in enumerate(g.faces):
        for k in range(len(f)):
            face_id[(f[k], f[(k + 1) % len(f)])] = fi
    start = face_id[(g.outer[0], g.outer[1])]
    outside = {start}
    stack = [start]
    faces = g.faces
    while stack:
        fi = stack.pop()
        f = faces[fi]
        for k in range(len(f)):
            a, b = f[k], f[(k + 1) % len(f)]
            if edge_key(a, b) in cyc or edge_key(a, b) == closing:
                continue
            other = face_id[(b, a)]
            if other not in outside:
                outside.add(other)
                stack.append(other)
    left, right = set(cyc), set(cyc)
    left.add(closing)
    for e in g.edge_set:
        if e in cyc or e == closing:
            continue
        if face_id[e] in outside:
            right.add(e)
        else:
            left.add(e)
    return LeftRightSplit(c, frozenset(left), frozenset(right))


def _outer_faces(g: PlaneTriangulation) -> list[tuple[int, ...]]:
    return [tuple(g.outer)]


def find_hamiltonian_cycles(g: PlaneTriangulation, limit: int | None = None) -> list[HamiltonianCycle]:
    """Enumerate undirected Hamiltonian cycles by backtracking.

    Each cycle is reported once, starting at vertex 0 with the smaller
    of the two neighbours of 0 second.
    """
    n = g.n
    if limit is None and n > 12:
        raise InstanceError("exhaustive enumeration is limited to n <= 12; pass limit")
    adj = [sorted(r) for r in g.rotation]
    out: list[HamiltonianCycle] = []
    path = [0]
    used = [False] * n
    used[0] = True

    def rec() -> bool:
        v = path[-1]
        if len(path) == n:
            if g.has_edge(v, 0) and path[1] < v:
                out.append(HamiltonianCycle(tuple(path)))
                if limit is not None and len(out) >= limit:
                    return True
            return False
        for u in adj[v]:
            if not used[u]:
                used[u] = True
                path.append(u)
                if rec():
                    return True
                path.pop()
                used[u] = False
        return False

    rec()
    return out


def cycle_setups(g: PlaneTriangulation, c: HamiltonianCycle) -> list[tuple[PlaneTriangulation, HamiltonianCycle]]:
    """All relabellings of ``c`` as ``v1..vn`` with ``(v1, vn)`` on a chosen outer face.

    Each cycle edge may serve as closing edge in both directions, and
    either face on it may be the outer face.
    """
    order = c.order
    n = len(order)
    out = []
    for k in range(n):
        seq = order[k + 1:] + order[: k + 1]  # closing edge (seq[0], seq[-1])
        for s in (seq, tuple(reversed(seq))):
            v1, vn = s[0], s[-1]
            for a, b in ((v1, vn), (vn, v1)):
                f = g.face_of(a, b)
                if len(f) != 3:
                    continue
                h = g.with_outer(*f)
                out.append((h, HamiltonianCycle(tuple(s))))
    return out


__all__ = [
    "InstanceError",
    "PlaneTriangulation",
    "ValidationReport",
    "WeightedInstance",
    "HamiltonianCycle",
    "LeftRightSplit",
    "validate",
    "is_maximal_outerplanar",
    "make_instance",
    "parse_instance",
    "dump_instance",
    "from_edges_faces",
    "augment_to_maximal",
    "check_cycle",
    "split_left_right",
    "find_hamiltonian_cycles",
    "cycle_setups",
    "edge_key",
]
