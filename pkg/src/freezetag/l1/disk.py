"""Makespan at most 5r for any set of sleepers in the l1 disk of radius r.

The disk (centred at the awake robot) splits into four squares E, N, W, S
and eight octant triangles.  The dispatch depends on the number n0 of
sleepers in the densest square.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations

import numpy as np

from ..core import Instance, InvalidInputError, Schedule, WakeupTree
from .fleet import Fleet, Frame, to_uv, to_xy
from .squares import TOL, SquareWaker, square_frame
from .triangle import TriangleWaker

# squares in tie-break order, with the octants they hold and their frame signs (a, d)
SQUARES = ("E", "N", "W", "S")
SQUARE_OCTANTS = ((7, 0), (1, 2), (3, 4), (5, 6))
_SQUARE_SIGNS = ((1, 1), (1, -1), (-1, -1), (-1, 1))

# octant triangles in (x, y): corner C on an axis, right-angle corner A on a diagonal
_OCTANT_CA = (
    ((1, 0), (0.5, 0.5)),
    ((0, 1), (0.5, 0.5)),
    ((0, 1), (-0.5, 0.5)),
    ((-1, 0), (-0.5, 0.5)),
    ((-1, 0), (-0.5, -0.5)),
    ((0, -1), (-0.5, -0.5)),
    ((0, -1), (0.5, -0.5)),
    ((1, 0), (0.5, -0.5)),
)

# the proof's constant c = 90 makes 3 + c / sqrt(n) <= 5 from here on
LINEAR_THRESHOLD = 2025


def octants(xy):
    """Octant index of each nonzero point; octant k covers angles [45k, 45(k+1)) degrees."""
    xy = np.asarray(xy, dtype=float).reshape(-1, 2)
    x, y = xy[:, 0], xy[:, 1]
    out = np.full(len(xy), -1)
    conds = (
        (y >= 0) & (y < x),
        (x > 0) & (y >= x),
        (x <= 0) & (y > -x),
        (y > 0) & (y <= -x),
        (y <= 0) & (y > x),
        (x < 0) & (y <= x),
        (x >= 0) & (y < -x),
        (y < 0) & (y >= -x),
    )
    for k, c in enumerate(conds):
        out[c & (out < 0)] = k
    return out


def densest_square(xy):
    """(index into SQUARES, counts) of the square holding the most points; ties go to the E, N, W, S order."""
    oct_ = octants(xy)
    counts = [int(np.count_nonzero((oct_ == a) | (oct_ == b))) for a, b in SQUARE_OCTANTS]
    return counts.index(max(counts)), counts


def square_frames(r):
    return [Frame(0.0, 0.0, r, a, 0, 0, d) for a, d in _SQUARE_SIGNS]


def octant_frame(k, r):
    C, A = _OCTANT_CA[k]
    Cuv = to_uv(np.array(C) * r).tolist()
    Auv = to_uv(np.array(A) * r).tolist()
    return Frame.from_corners((0.0, 0.0), Cuv, Auv)


class DiskWaker:
    def __init__(self, fleet: Fleet, trace=None):
        self.fleet = fleet
        self.trace = trace
        self.sq = SquareWaker(fleet, trace)
        self.tri = TriangleWaker(fleet, trace)

    def _note(self, name):
        if self.trace is not None:
            self.trace.append(name)

    def _home(self, robots):
        for a in robots:
            self.fleet.move(a, 0.0, 0.0)
        return sorted(robots, key=lambda a: a.t)

    def run(self, agent, ids, r):
        """Wake targets `ids` (all nonzero, within r of the origin) from `agent` at the origin."""
        U = np.asarray(self.fleet.U)[ids]
        V = np.asarray(self.fleet.V)[ids]
        xy = to_xy(np.column_stack([U, V]))
        oct_ = octants(xy)
        groups = [[] for _ in range(8)]
        for j, k in zip(ids, oct_.tolist()):
            groups[k].append(j)
        squares = [groups[a] + groups[b] for a, b in SQUARE_OCTANTS]
        d, counts = densest_square(xy)
        n0 = counts[d]
        frames = square_frames(r)
        others = [k for k in range(4) if k != d]
        if n0 == 0:
            return
        if n0 == 1:
            self._note("disk-n0=1")
            self._few(agent, [s[0] for s in squares if s])
        elif n0 <= 5:
            self._note("disk-n0<=5")
            robots = self._home(self.sq.square5(frames[d], agent, squares[d]))
            for k, a in zip(others, robots):
                self.sq.square5(frames[k], a, squares[k])
        elif n0 <= 10:
            self._note("disk-n0<=10")
            mine = sorted(squares[d])
            robots = self._home(self.sq.square6_return(frames[d], agent, mine[:6]))
            self.sq.square5(frames[d], robots[0], mine[6:])
            for q, k in enumerate(others):
                pts = sorted(squares[k])
                h = (len(pts) + 1) // 2
                self.sq.square5(frames[k], robots[1 + 2 * q], pts[:h])
                self.sq.square5(frames[k], robots[2 + 2 * q], pts[h:])
        else:
            self._note("disk-n0>=11")
            a, b = SQUARE_OCTANTS[d]
            t = a if len(groups[a]) >= len(groups[b]) else b
            start = len(self.fleet.agents)
            self._triangle(t, r, agent, groups[t])
            robots = self._home([agent] + self.fleet.agents[start:])
            rest = [k for k in range(8) if k != t and groups[k]]
            for k, rob in zip(rest, robots):
                self._triangle(k, r, rob, groups[k])

    def _triangle(self, k, r, agent, ids):
        fr = octant_frame(k, r)
        self.tri.run(fr, "B", [agent], self.tri._local(fr, ids))

    def _few(self, agent, ids):
        """At most four sleepers: one wake, then two robots each wake one, then any robot the last."""
        sq = self.sq
        best = None
        for perm in permutations(ids):
            a, rest = perm[0], list(perm[1:])
            base = {-1: [a] + rest[:1]}
            if len(rest) > 1:
                base[a] = [rest[1]]
            cands = [base]
            if len(rest) == 3:
                b, c, last = rest
                cands = [
                    {-1: [a, b, last], a: [c]},
                    {-1: [a, b], a: [c, last]},
                    {-1: [a, b], a: [c], b: [last]},
                    {-1: [a, b], a: [c], c: [last]},
                ]
            for plan in cands:
                val = sq.evaluate(plan, agent)
                if best is None or val < best[0] - 1e-15:
                    best = (val, plan)
        sq.execute(best[1], agent)


def wake_l1_disk(instance: Instance, method: str = "auto", trace=None) -> WakeupTree:
    """Wake-up tree of makespan at most 5 * radius_r for an l1 instance.

    `method` is "constructive", "linear" or "auto" (constructive below
    LINEAR_THRESHOLD sleepers; above it the linear-time cone algorithm
    whenever its own bound is already within 5 * radius_r).
    """
    norm = instance.norm
    if not norm.is_l1:
        raise InvalidInputError("wake_l1_disk needs an l1 instance")
    if method not in ("auto", "constructive", "linear"):
        raise InvalidInputError(f"unknown method {method!r}")
    n = instance.n
    if n == 0:
        return WakeupTree.from_parents(instance.positions, [-1], norm)
    if method == "linear" or (method == "auto" and n >= LINEAR_THRESHOLD):
        from ..cones import general_norm_wakeup

        rep = general_norm_wakeup(instance, threshold=0)
        # keep it only when its own guarantee already meets the target
        if method == "linear" or rep.claimed_bound <= 5 * instance.radius * (1 + 1e-12):
            if trace is not None:
                trace.append("cones")
            return rep.tree
    rel = instance.sleepers - instance.p0
    UV = to_uv(rel)
    U, V = UV[:, 0], UV[:, 1]
    r = float(np.max(np.maximum(np.abs(U), np.abs(V))))
    fleet = Fleet(U.tolist(), V.tolist())
    agent = fleet.start(0.0, 0.0)
    zero = (U == 0) & (V == 0)
    for j in np.flatnonzero(zero).tolist():
        fleet.wake(agent, j)
    ids = np.flatnonzero(~zero).tolist()
    if ids:
        DiskWaker(fleet, trace).run(agent, ids, r)
    parent, wp = fleet.tree_arrays()
    waypoints = {}
    if wp:
        keys = list(wp)
        flat = to_xy(np.array([q for k in keys for q in wp[k]])) + instance.p0
        cuts = np.cumsum([len(wp[k]) for k in keys])[:-1]
        waypoints = dict(zip(keys, np.split(flat, cuts)))
    order = [0] + [j + 1 for j in fleet.order]
    return WakeupTree.from_parents(instance.positions, parent, norm, waypoints, order=order)


# public region wrappers


@dataclass(frozen=True)
class SquareRegion:
    """l1 square with left corner `corner_left` and axis-parallel diagonals of length `diagonal`."""

    corner_left: tuple
    diagonal: float

    def corners(self):
        x, y = self.corner_left
        h = self.diagonal / 2
        return {"left": (x, y), "top": (x + h, y + h), "right": (x + 2 * h, y), "bottom": (x + h, y - h)}

    def frame(self, start):
        return square_frame(self.corner_left, self.diagonal, start)


@dataclass(frozen=True)
class TriangleRegion:
    """Isosceles right l1 triangle: hypotenuse BC, right angle at A."""

    B: tuple
    C: tuple
    A: tuple

    def frame(self, mirror=False):
        B, C, A = (to_uv(np.array(p, dtype=float)).tolist() for p in (self.B, self.C, self.A))
        if mirror:
            B, C = C, B
        fr = Frame.from_corners(B, C, A)
        # check the placement against the corners
        for loc, g in (((0.0, 0.0), B), ((1.0, 1.0), C), ((1.0, 0.0), A)):
            if max(abs(x - y) for x, y in zip(fr.g(*loc), g)) > 1e-9 * max(1.0, fr.s):
                raise InvalidInputError("not an isosceles right triangle with axis-parallel hypotenuse in l1")
        return fr


@dataclass(frozen=True)
class StartConfig:
    """Start of a triangle group: "A", "B", "C" (one robot at that corner) or "leg" (two robots at `point`)."""

    variant: str
    point: tuple | None = None


def _region_fleet(sleepers):
    S = np.asarray(sleepers, dtype=float).reshape(-1, 2)
    UV = to_uv(S)
    return S, Fleet(UV[:, 0].tolist(), UV[:, 1].tolist())


def _inside_square(fr, fleet, ids):
    for j in ids:
        u, v = fr.local(fleet.U[j], fleet.V[j])
        if not (-TOL <= u <= 1 + TOL and -TOL <= v <= 1 + TOL):
            raise InvalidInputError(f"sleeper {j} lies outside the square")


def wake_square5(square: SquareRegion, sleepers, start="left") -> Schedule:
    """At most five sleepers of a square woken from a corner within two diagonals."""
    S, fleet = _region_fleet(sleepers)
    if len(S) > 5:
        raise InvalidInputError("at most 5 sleepers allowed")
    fr = square.frame(start)
    _inside_square(fr, fleet, range(len(S)))
    agent = fleet.start(*fr.g(0.0, 0.0))
    SquareWaker(fleet).square5(fr, agent, list(range(len(S))))
    return fleet.schedule()


def wake_square6_return(square: SquareRegion, sleepers, start="left") -> Schedule:
    """Six sleepers woken and all seven robots back at the start corner within three diagonals."""
    S, fleet = _region_fleet(sleepers)
    if len(S) != 6:
        raise InvalidInputError("exactly 6 sleepers required")
    fr = square.frame(start)
    _inside_square(fr, fleet, range(6))
    agent = fleet.start(*fr.g(0.0, 0.0))
    SquareWaker(fleet).square6_return(fr, agent, list(range(6)))
    return fleet.schedule()


def wake_triangle(tri: TriangleRegion, sleepers, start: StartConfig, trace=None) -> Schedule:
    """All sleepers of the triangle woken within two diameters of the start."""
    S, fleet = _region_fleet(sleepers)
    variant = start.variant
    if variant == "C":
        fr, kind = tri.frame(mirror=True), "B"
    elif variant in ("A", "B"):
        fr, kind = tri.frame(), variant
    elif variant == "leg":
        if start.point is None:
            raise InvalidInputError("a leg start needs a point")
        pu, pv = to_uv(np.array(start.point, dtype=float)).tolist()
        fr = None
        for mirror in (False, True):
            f = tri.frame(mirror)
            u, v = f.local(pu, pv)
            if abs(v) <= 1e-9 and -1e-9 <= u <= 1 + 1e-9:
                fr = f
                break
        if fr is None:
            raise InvalidInputError("start point is not on a leg of the triangle")
        kind = "C"
    else:
        raise InvalidInputError(f"unknown start variant {variant!r}")
    ids = list(range(len(S)))
    for j in ids:
        u, v = fr.local(fleet.U[j], fleet.V[j])
        if not (-TOL <= v <= u + TOL and u <= 1 + TOL):
            raise InvalidInputError(f"sleeper {j} lies outside the triangle")
    if kind == "C":
        p = fr.g(u=fr.local(pu, pv)[0], v=0.0)
        agents = [fleet.start(*p), fleet.start(*p)]
    else:
        agents = [fleet.start(*fr.g(*((1.0, 0.0) if kind == "A" else (0.0, 0.0))))]
    tw = TriangleWaker(fleet, trace)
    tw.run(fr, kind, agents, tw._local(fr, ids))
    return fleet.schedule()
