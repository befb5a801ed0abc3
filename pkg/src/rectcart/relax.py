"""Air-pressure relaxation of a rectangular subdivision towards prescribed areas.

Every rectangle ``r`` has a target ``t_r`` and pressure ``P_r = t_r / A_r``.
A maximal segment feels the pressure of the rectangles on both sides,
weighted by their contact length, and the segment with the largest
net force moves.  The force is minus the gradient of
``E = -sum t_r log A_r``, so each move is a damped Newton step on the
segment's coordinate, backtracked until ``E`` decreases.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from .geometry import Layout, Rect, polygon_area, union_polygon
from .graph import WeightedInstance
from .octo import RectSubdivision, maximal_segments


DEFAULT_SIDE_SHARE = Fraction(1, 50)


class RelaxError(ValueError):
    """Raised for layouts the relaxer cannot handle."""


@dataclass(frozen=True)
class RectWeights:
    """Target area per rectangle, listed as ``(vertex, part name, target)``."""

    entries: tuple[tuple[int, str, Fraction], ...]

    def per_vertex(self) -> dict[int, Fraction]:
        out: dict[int, Fraction] = {}
        for v, _, t in self.entries:
            out[v] = out.get(v, 0) + t
        return out


def split_weights(inst: WeightedInstance, r: RectSubdivision) -> RectWeights:
    """Half of each weight to ``H`` and ``B``; side pieces get nothing.

    A vertex without a ``B`` piece (the top vertex) puts its whole weight
    on ``H``.
    """
    out = []
    for v, parts in enumerate(r.rects):
        w = inst.weights[v]
        names = [k for k in ("H", "B") if k in parts]
        for k in parts:
            out.append((v, k, w / len(names) if k in names else Fraction(0)))
    return RectWeights(tuple(out))


def wall_force(push: Sequence[tuple[float, float]], resist: Sequence[tuple[float, float]]) -> float:
    """Net outward force: pressure times length summed over pushing minus resisting sides."""
    return sum(p * l for p, l in push) - sum(p * l for p, l in resist)


@dataclass
class RelaxParams:
    """Solver settings.

    ``method`` is ``"newton"`` (all segments per step) or ``"pressure"``
    (one segment per step).  ``select`` picks that segment by largest
    ``|F|`` (``"force"``) or largest predicted energy drop (``"gain"``),
    ties to the lowest segment id.  The solver is deterministic; ``seed`` only
    travels with the run so callers can record how the instance was made.
    """

    eta: float = 1.0
    max_iters: int = 1_000_000
    eps: float = 0.01
    delta_rel: float = 1e-6
    seed: int = 0
    method: str = "newton"
    select: str = "force"

    def __post_init__(self):
        if self.eta <= 0:
            raise RelaxError("eta must be positive")
        if self.eps < 0:
            raise RelaxError("error target must be non-negative")
        if self.select not in ("force", "gain"):
            raise RelaxError(f"unknown selection rule {self.select!r}")
        if self.method not in ("newton", "pressure"):
            raise RelaxError(f"unknown method {self.method!r}")


@dataclass
class RelaxStats:
    iterations: int
    error: float
    converged: bool
    millis: float
    audits: int = 0


class RelaxState:
    """Mutable segment positions of one relaxation run.

    ``pos`` holds the coordinate of every maximal segment followed by the
    four fixed frame sides.  Rectangles refer to positions by index.
    """

    def __init__(self, rects: Sequence[Rect], owners: Sequence[int], targets: Sequence[float],
                 weights: Sequence[float], bbox: Rect, frame: tuple[float, float],
                 labels: Sequence[str] = (), delta_rel: float = 1e-6, parts: Sequence[str] = ()):
        W, H = float(frame[0]), float(frame[1])
        sx = Fraction(frame[0]) / Fraction(bbox.x1 - bbox.x0)
        sy = Fraction(frame[1]) / Fraction(bbox.y1 - bbox.y0)
        fx = lambda x: float((Fraction(x) - Fraction(bbox.x0)) * sx)  # noqa: E731
        fy = lambda y: float((Fraction(y) - Fraction(bbox.y0)) * sy)  # noqa: E731
        segs = maximal_segments(list(rects), bbox)
        self.segments = segs
        self.axis = [s.axis for s in segs]
        S = len(segs)
        self.n_seg = S
        self.pos = [fx(s.coord) if s.axis == "v" else fy(s.coord) for s in segs] + [0.0, W, 0.0, H]
        left, right, bottom, top = S, S + 1, S + 2, S + 3
        index: dict[tuple[str, object], list[tuple[object, object, int]]] = {}
        for k, s in enumerate(segs):
            index.setdefault((s.axis, s.coord), []).append((s.lo, s.hi, k))

        def find(axis, coord, a, z, fixed_lo, fixed_hi, lo_val, hi_val):
            if coord == lo_val:
                return fixed_lo
            if coord == hi_val:
                return fixed_hi
            for lo, hi, k in index.get((axis, coord), ()):
                if lo <= a and z <= hi:
                    return k
            raise RelaxError("rectangle side lies on no segment")

        self.rx0, self.rx1, self.ry0, self.ry1 = [], [], [], []
        for r in rects:
            self.rx0.append(find("v", r.x0, r.y0, r.y1, left, right, bbox.x0, bbox.x1))
            self.rx1.append(find("v", r.x1, r.y0, r.y1, left, right, bbox.x0, bbox.x1))
            self.ry0.append(find("h", r.y0, r.x0, r.x1, bottom, top, bbox.y0, bbox.y1))
            self.ry1.append(find("h", r.y1, r.x0, r.x1, bottom, top, bbox.y0, bbox.y1))
        self.owners = list(owners)
        self.parts = list(parts) or ["H"] * len(self.owners)
        self.target = [float(t) for t in targets]
        self.weights = [float(w) for w in weights]
        self.labels = tuple(labels) or tuple(str(v) for v in range(len(weights)))
        self.frame = (W, H)
        self.area_total = W * H
        self.scale = max(W, H)
        self.delta = delta_rel * min(W, H)
        # rects whose high (top/right) side is on s, and whose low side is on s
        self.below: list[list[int]] = [[] for _ in range(S)]
        self.above: list[list[int]] = [[] for _ in range(S)]
        for r in range(len(rects)):
            for hi_ref, lo_ref in ((self.rx1[r], self.rx0[r]), (self.ry1[r], self.ry0[r])):
                if hi_ref < S:
                    self.below[hi_ref].append(r)
                if lo_ref < S:
                    self.above[lo_ref].append(r)
        self.force = [0.0] * S
        self.rule = "force"
        for s in range(S):
            self.force[s] = self._force(s)
        self.gain = [self._gain(s) for s in range(S)]
        if any(self.width(r) <= 0 or self.height(r) <= 0 for r in range(len(rects))):
            raise RelaxError("degenerate rectangle in seed layout")

    # -- geometry -------------------------------------------------------------

    @property
    def n_rects(self) -> int:
        return len(self.rx0)

    def width(self, r: int) -> float:
        return self.pos[self.rx1[r]] - self.pos[self.rx0[r]]

    def height(self, r: int) -> float:
        return self.pos[self.ry1[r]] - self.pos[self.ry0[r]]

    def area(self, r: int) -> float:
        return self.width(r) * self.height(r)

    def rect(self, r: int) -> Rect:
        p = self.pos
        return Rect(p[self.rx0[r]], p[self.ry0[r]], p[self.rx1[r]], p[self.ry1[r]])

    def along(self, s: int, r: int) -> float:
        """Length of rectangle ``r``'s side on segment ``s``."""
        return self.width(r) if self.axis[s] == "h" else self.height(r)

    def across(self, s: int, r: int) -> float:
        """Extent of ``r`` perpendicular to segment ``s``."""
        return self.height(r) if self.axis[s] == "h" else self.width(r)

    def vertex_areas(self) -> list[float]:
        out = [0.0] * len(self.weights)
        for r in range(self.n_rects):
            out[self.owners[r]] += self.area(r)
        return out

    def error(self) -> float:
        return max(abs(a - w) / w for a, w in zip(self.vertex_areas(), self.weights))

    # -- forces ---------------------------------------------------------------

    def pressure(self, r: int) -> float:
        a = self.area(r)
        if a <= 0:
            raise RelaxError("zero-area region")
        return self.target[r] / a

    def _force(self, s: int) -> float:
        f = 0.0
        for r in self.below[s]:
            f += self.pressure(r) * self.along(s, r)
        for r in self.above[s]:
            f -= self.pressure(r) * self.along(s, r)
        return f

    def _gain(self, s: int) -> float:
        """Predicted energy drop ``F^2 / K`` of a Newton move of ``s`` alone."""
        k = 0.0
        for r in self.below[s] + self.above[s]:
            t = self.target[r]
            if t:
                k += t * (self.along(s, r) / self.area(r)) ** 2
        f = self.force[s]
        return f * f / k if k > 0 else abs(f) * math.inf if f else 0.0

    def _group(self, s: int, sigma: int) -> list[int] | None:
        """Segments that must move with ``s`` in direction ``sigma``.

        A zero-target rectangle squeezed to the minimum thickness ahead
        of a moving segment is carried along: the segment on its far side
        joins the group.  ``None`` when the chain runs into the frame.
        """
        group = [s]
        seen = {s}
        k = 0
        while k < len(group):
            t = group[k]
            k += 1
            ahead = self.above[t] if sigma > 0 else self.below[t]
            for r in ahead:
                if self.target[r] or self.across(t, r) > 2 * self.delta:
                    continue
                far = (self.ry1[r] if self.axis[t] == "h" else self.rx1[r]) if sigma > 0 else (
                    self.ry0[r] if self.axis[t] == "h" else self.rx0[r])
                if far >= self.n_seg:
                    return None
                if far not in seen:
                    seen.add(far)
                    group.append(far)
        return group

    def _plan(self, group: list[int]) -> dict[int, tuple[float, int]]:
        """Per touched rectangle: area change per unit move and thickness change sign."""
        plan: dict[int, tuple[float, int]] = {}
        for t in group:
            for r in self.below[t]:
                c, k = plan.get(r, (0.0, 0))
                plan[r] = (c + self.along(t, r), k + 1)
            for r in self.above[t]:
                c, k = plan.get(r, (0.0, 0))
                plan[r] = (c - self.along(t, r), k - 1)
        return plan

    def _energy(self, plan: dict[int, tuple[float, int]], d: float) -> float:
        e = 0.0
        for r, (c, _) in plan.items():
            t = self.target[r]
            if t:
                a = self.area(r) + d * c
                if a <= 0:
                    return math.inf
                e -= t * math.log(a)
        return e

    def _try(self, group: list[int], eta: float) -> float | None:
        plan = self._plan(group)
        f = 0.0
        k = 0.0
        lo, hi = -math.inf, math.inf
        for r, (c, kk) in plan.items():
            t = self.target[r]
            if t and c:
                a = self.area(r)
                f += t * c / a
                k += t * (c / a) ** 2
            if kk:
                # thickness after a move d is across + kk * d
                th = (self.height(r) if self.axis[group[0]] == "h" else self.width(r)) - self.delta
                if kk > 0:
                    lo = max(lo, -th / kk)
                else:
                    hi = min(hi, th / -kk)
        lo, hi = min(lo, 0.0), max(hi, 0.0)
        if f == 0 or k == 0:
            return None
        lim = hi if f > 0 else -lo
        if lim <= self.delta * 1e-3:
            return None
        d = max(lo, min(hi, eta * f / k))
        e0 = self._energy(plan, 0.0)
        tiny = 1e-12 * self.scale
        while abs(d) > tiny:
            if self._energy(plan, d) < e0:
                return d
            d /= 2
        return None

    def move(self, group: list[int] | int, d: float) -> None:
        group = [group] if isinstance(group, int) else group
        touched = set()
        for s in group:
            self.pos[s] += d
            touched.update(self.below[s])
            touched.update(self.above[s])
        segs = set()
        for r in touched:
            for ref in (self.rx0[r], self.rx1[r], self.ry0[r], self.ry1[r]):
                if ref < self.n_seg:
                    segs.add(ref)
        for t in segs:
            self.force[t] = self._force(t)
        for t in segs:
            self.gain[t] = self._gain(t)

    def step(self, eta: float = 1.0) -> tuple[list[int], float] | None:
        """Move the segment (with any carried segments) of largest force that can move.

        Returns the moved segments and the displacement, or ``None`` when
        no segment can lower the energy.
        """
        f = self.force
        key = self.gain if self.rule == "gain" else [abs(x) for x in f]
        for s in sorted(range(self.n_seg), key=lambda s: (-key[s], s)):
            if f[s] == 0:
                return None
            sigma = 1 if f[s] > 0 else -1
            d = self._try([s], eta)
            group = [s]
            if d is None:
                group = self._group(s, sigma)
                if group is None or len(group) == 1:
                    continue
                d = self._try(group, eta)
                if d is None:
                    continue
            self.move(group, d)
            return group, d
        return None

    def energy(self) -> float:
        e = 0.0
        for r in range(self.n_rects):
            if self.target[r]:
                e -= self.target[r] * math.log(self.area(r))
        return e

    def _axis_arrays(self):
        if not hasattr(self, "_arr"):
            S = self.n_seg
            tg = np.array(self.target)
            arr = {}
            for axis, lo, hi in (("v", self.rx0, self.rx1), ("h", self.ry0, self.ry1)):
                arr[axis] = (np.array(lo), np.array(hi))
            self._arr = (S, tg, arr)
        return self._arr

    def newton_step(self, eta: float = 1.0) -> tuple[list[int], float] | None:
        """Move every segment along the Newton direction of the energy.

        The energy splits into a width part over vertical segments and a
        height part over horizontal ones.  Each part has a weighted
        Laplacian as Hessian and gets its own step length, shortened to
        keep every rectangle at least ``delta`` thick and halved until
        that part of the energy drops.
        """
        S, tg, arr = self._axis_arrays()
        x = np.array(self.pos)
        moved: list[int] = []
        best = 0.0
        for axis, (lo, hi) in arr.items():
            idx = np.array([s for s in range(S) if self.axis[s] == axis], dtype=int)
            if idx.size == 0:
                continue
            ext = x[hi] - x[lo]
            c = tg / ext
            grad = np.zeros(S + 4)
            np.add.at(grad, hi, c)
            np.subtract.at(grad, lo, c)
            w = tg / ext**2
            hess = np.zeros((S + 4, S + 4))
            np.add.at(hess, (hi, hi), w)
            np.add.at(hess, (lo, lo), w)
            np.subtract.at(hess, (hi, lo), w)
            np.subtract.at(hess, (lo, hi), w)
            sub = hess[np.ix_(idx, idx)]
            d = np.zeros(S + 4)
            try:
                d[idx] = np.linalg.solve(sub, grad[idx])
            except np.linalg.LinAlgError:
                d[idx] = grad[idx] / np.maximum(np.diag(sub), 1e-300)
            d *= eta
            if not np.any(d):
                continue
            rate = d[hi] - d[lo]
            shrink = rate < 0
            alpha = 1.0
            if np.any(shrink):
                limit = (ext[shrink] - self.delta) / -rate[shrink]
                alpha = max(min(alpha, float(np.min(limit))), 0.0)
            e0 = -float(np.dot(tg, np.log(ext)))
            tiny = 1e-12 * self.scale / float(np.max(np.abs(d)))
            while alpha > tiny:
                trial = x + alpha * d
                if -float(np.dot(tg, np.log(trial[hi] - trial[lo]))) < e0:
                    x = trial
                    moved.extend(int(s) for s in idx if d[s] != 0)
                    best = max(best, alpha)
                    break
                alpha /= 2
        if not moved:
            return None
        self.pos[:S] = x[:S].tolist()
        self.force = [self._force(s) for s in range(S)]
        self.gain = [self._gain(s) for s in range(S)]
        return sorted(moved), best

    # -- output ---------------------------------------------------------------

    def layout(self) -> Layout:
        n = len(self.weights)
        groups: list[list[Rect]] = [[] for _ in range(n)]
        for r in range(self.n_rects):
            groups[self.owners[r]].append(self.rect(r))
        polys = tuple(union_polygon(g) for g in groups)
        return Layout(polys, Rect(0.0, 0.0, self.frame[0], self.frame[1]), self.labels)

    def pressures(self) -> list[float]:
        return [w / a for a, w in zip(self.vertex_areas(), self.weights)]


def with_side_share(weights: RectWeights, share: Fraction | float) -> RectWeights:
    """Give every zero-target rectangle ``share`` of its vertex's weight.

    The amount is taken evenly from the vertex's positive targets, so
    per-vertex totals are unchanged.
    """
    share = Fraction(share)
    if share == 0:
        return weights
    per_vertex = weights.per_vertex()
    zero: dict[int, int] = {}
    pos: dict[int, int] = {}
    for v, _, t in weights.entries:
        (pos if t > 0 else zero)[v] = (pos if t > 0 else zero).get(v, 0) + 1
    out = []
    for v, k, t in weights.entries:
        moved = share * per_vertex[v] * zero.get(v, 0)
        if t > 0:
            out.append((v, k, t - moved / pos[v]))
        else:
            out.append((v, k, share * per_vertex[v]))
    return RectWeights(tuple(out))


def prepare(inst: WeightedInstance, sd: RectSubdivision, weights: RectWeights | None = None,
            delta_rel: float = 1e-6, side_share: Fraction | float = DEFAULT_SIDE_SHARE) -> RelaxState:
    """Relaxation state for ``sd`` mapped onto the instance frame."""
    weights = split_weights(inst, sd) if weights is None else weights
    weights = with_side_share(weights, side_share)
    rects = [sd.rects[v][k] for v, k, _ in weights.entries]
    return RelaxState(
        rects,
        [v for v, _, _ in weights.entries],
        [t for _, _, t in weights.entries],
        inst.weights,
        sd.bbox,
        inst.frame,
        inst.graph.labels,
        delta_rel,
        [k for _, k, _ in weights.entries],
    )


def relax(state: RelaxState, params: RelaxParams | None = None,
          audit: Callable[[RelaxState, int], None] | None = None) -> RelaxStats:
    """Step until the cartographic error drops below ``eps`` or the budget runs out.

    ``audit`` is called after every step; it may raise to abort the run.
    """
    params = params or RelaxParams()
    t0 = time.perf_counter()
    it = 0
    err = state.error()
    while err >= params.eps and it < params.max_iters:
        state.rule = params.select
        res = state.newton_step(params.eta) if params.method == "newton" else state.step(params.eta)
        if res is None:
            break
        it += 1
        if audit is not None:
            audit(state, it)
        err = state.error()
    ms = (time.perf_counter() - t0) * 1000
    return RelaxStats(it, err, err < params.eps, ms)


def cartographic_error(layout: Layout, weights: Sequence[float]) -> float:
    """Largest relative area deviation over the polygons."""
    return max(abs(float(polygon_area(p)) - float(w)) / float(w) for p, w in zip(layout.polygons, weights))


def min_feature_size(state: RelaxState) -> float:
    """Thinnest side among the ``H`` and ``B`` rectangles.

    Side pieces have zero area under the default split, so they are
    not features of the cartogram.
    """
    return min(
        min(state.width(r), state.height(r)) for r in range(state.n_rects) if state.parts[r] in ("H", "B")
    )
