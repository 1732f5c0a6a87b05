"""Waking up to six robots in an l1 square from one of its corners.

A square is handled through a `Frame` whose local copy is [0,1]^2 in rotated
coordinates with the starting corner at (0,0).  In local (x, y) =
((u+v)/2, (u-v)/2) the start is the left corner and every sleeper lies to
its right.

Plans are dictionaries mapping a robot (-1 for the starting robot, j for
the robot woken at target j) to its route: target ids, or (U, V) waypoints.
"""
from __future__ import annotations

from itertools import permutations, product

import numpy as np

from ..core import InvalidInputError
from ..exact import solve_matrix
from .fleet import Fleet, Frame, cheb, to_uv

TOL = 1e-9


def _mono(ax, ay, bx, by, cx, cy):
    return (bx - ax) * (cx - bx) >= 0 and (by - ay) * (cy - by) >= 0


def is_monotone(path):
    """True when every step of the (x, y) polyline goes in one quadrant direction."""
    P = np.asarray(path, dtype=float).reshape(-1, 2)
    d = np.diff(P, axis=0)
    ok = True
    for k in range(2):
        c = d[:, k]
        ok &= bool(np.all(c >= 0) or np.all(c <= 0))
    return ok


def monotone_triple(points):
    """Indices (i, j, k) of a monotonic 3-point path; ties count as compatible.

    Ordered triples are scanned lexicographically, so the first hit is
    returned.  At least five points are required (a monotone triple then
    always exists).
    """
    P = np.asarray(points, dtype=float).reshape(-1, 2)
    if len(P) < 5:
        raise InvalidInputError("monotone_triple needs at least 5 points")
    t = _triple(P.tolist(), range(len(P)))
    if t is None:
        raise RuntimeError("no monotone triple found")
    return t


def _triple(P, idx, middle_ok=lambda j: True):
    idx = list(idx)
    for i in idx:
        for j in idx:
            if j == i or not middle_ok(j):
                continue
            for k in idx:
                if k == i or k == j:
                    continue
                if _mono(P[i][0], P[i][1], P[j][0], P[j][1], P[k][0], P[k][1]):
                    return i, j, k
    return None


def square_frame(corner_left, diagonal, start="left"):
    """Frame of the l1 square with left corner `corner_left` and given diagonal.

    `start` names the corner the robot starts from: left, top, right or bottom.
    """
    Uc, Vc = to_uv(corner_left).tolist()
    d = float(diagonal)
    if not d > 0:
        raise InvalidInputError("square diagonal must be positive")
    spec = {
        "left": (Uc, Vc, 1, 1),
        "top": (Uc + d, Vc, -1, 1),
        "right": (Uc + d, Vc + d, -1, -1),
        "bottom": (Uc, Vc + d, 1, -1),
    }
    if start not in spec:
        raise InvalidInputError(f"unknown start corner {start!r}")
    ou, ov, a, dd = spec[start]
    return Frame(ou, ov, d, a, 0, 0, dd)


class SquareWaker:
    """Square routines (five robots in two diameters, six robots plus return in three)."""

    def __init__(self, fleet: Fleet, trace=None):
        self.fleet = fleet
        self.U = fleet.U
        self.V = fleet.V
        self.trace = trace

    def _note(self, name):
        if self.trace is not None:
            self.trace.append(name)

    def _xy(self, frame, ids):
        """Local (x, y) of the given targets, the start corner at the origin."""
        out = {}
        for j in ids:
            u, v = frame.local(self.U[j], self.V[j])
            out[j] = ((u + v) * 0.5, (u - v) * 0.5)
        return out

    # plan evaluation and execution
    def _pos(self, step):
        if isinstance(step, tuple):
            return step
        return self.U[step], self.V[step]

    def evaluate(self, plan, agent, home=None):
        """Latest wake time (or return time when `home` is given) of a plan."""
        worst = agent.t
        stack = [(-1, agent.u, agent.v, agent.t)]
        while stack:
            key, u, v, t = stack.pop()
            for step in plan.get(key, ()):
                pu, pv = self._pos(step)
                t += cheb(u, v, pu, pv)
                u, v = pu, pv
                if not isinstance(step, tuple):
                    stack.append((step, u, v, t))
            if home is not None:
                t += cheb(u, v, home[0], home[1])
            if t > worst:
                worst = t
        return worst

    def execute(self, plan, agent, home=None):
        """Run a plan on the fleet; returns every robot involved."""
        robots = []
        stack = [(-1, agent)]
        fl = self.fleet
        while stack:
            key, a = stack.pop()
            robots.append(a)
            for step in plan.get(key, ()):
                if isinstance(step, tuple):
                    fl.move(a, *step)
                else:
                    stack.append((step, fl.wake(a, step)))
        if home is not None:
            for a in robots:
                fl.move(a, *home)
        return robots

    def _exact(self, agent, ids, home=False):
        """Optimal plan for a handful of targets (used when no proof case fits).

        With `home` every robot must end at the start position.
        """
        P = np.array([(agent.u, agent.v)] + [(self.U[j], self.V[j]) for j in ids])
        D = np.maximum(np.abs(P[:, None, 0] - P[None, :, 0]), np.abs(P[:, None, 1] - P[None, :, 1]))
        _, parent, _, _ = solve_matrix(D, home=0 if home else None)
        return routes_from_parents(parent, [-1] + list(ids))

    # five robots
    def square5(self, frame, agent, ids, bound=None):
        """Wake at most five targets of the square within 2 diameters of `agent.t`."""
        ids = list(ids)
        if len(ids) > 5:
            raise InvalidInputError("the five-robot square strategy takes at most 5 sleepers")
        if not ids:
            return [agent]
        limit = agent.t + 2 * frame.s * (1 + TOL) + TOL if bound is None else bound
        for name, plan in self._plans5(frame, agent, ids):
            if self.evaluate(plan, agent) <= limit:
                self._note(name)
                return self.execute(plan, agent)
        self._note("S5-exact")
        return self.execute(self._exact(agent, ids), agent)

    def _plans5(self, frame, agent, ids):
        n = len(ids)
        D = lambda j: cheb(agent.u, agent.v, self.U[j], self.V[j])
        if n <= 3:
            s = sorted(ids, key=D)
            plan = {-1: [s[0]] + s[1:2]}
            if n == 3:
                plan[s[0]] = [s[2]]
            yield "S5-small", plan
            return
        xy = self._xy(frame, ids)
        xy[-1] = (0.0, 0.0)
        if n == 4:
            for i, j, k in self._triples(xy, [-1] + ids):
                q = [p for p in ids if p not in (i, j, k)]
                if i == -1:
                    yield "S5-four", {-1: [j, k, q[0]], k: [q[1]]}
                else:
                    yield "S5-four", {-1: [i, j, k], i: q}
            return
        # five sleepers
        for a in ids:
            for b in ids:
                if a != b and _mono(0, 0, *xy[a], *xy[b]):
                    q = [p for p in ids if p not in (a, b)]
                    yield "S5-path", {-1: [a, b, q[0]], a: [q[1]], b: [q[2]]}
        top = max(ids, key=lambda j: (xy[j][1], -j))
        bot = min(ids, key=lambda j: (xy[j][1], j))
        for first, other in ((top, bot), (bot, top)):
            rest = [p for p in ids if p not in (first, other)]
            for p1 in rest:
                p2, p3 = [p for p in rest if p != p1]
                if _mono(*xy[first], *xy[p1], *xy[p2]) and _mono(*xy[first], *xy[p1], *xy[p3]):
                    yield "S5-extreme", {-1: [first, other], first: [p1, p2], p1: [p3]}

    def _triples(self, xy, idx):
        """Monotone triples with the start robot allowed only as the first point."""
        out = []
        for i in idx:
            for j in idx:
                if j == i or j == -1:
                    continue
                for k in idx:
                    if k in (i, j):
                        continue
                    if _mono(*xy[i], *xy[j], *xy[k]):
                        if k == -1:
                            i, k = k, i
                        out.append((i, j, k))
        return out

    # six robots with return
    def square6_return(self, frame, agent, ids):
        """Wake exactly six targets and bring all seven robots back to the corner within 3 diameters."""
        ids = list(ids)
        if len(ids) != 6:
            raise InvalidInputError("the six-robot square strategy takes exactly 6 sleepers")
        home = (agent.u, agent.v)
        limit = agent.t + 3 * frame.s * (1 + TOL) + TOL
        for name, plan in self._plans6(frame, ids):
            if self.evaluate(plan, agent, home) <= limit:
                self._note(name)
                return self.execute(plan, agent, home)
        self._note("S6-exact")
        return self.execute(self._exact(agent, ids, True), agent, home)

    def _plans6(self, frame, ids):
        xy = self._xy(frame, ids)
        O = (0.0, 0.0)
        # Case 1: a monotone path (p0, pi, pj, pk)
        for i in ids:
            if xy[i][0] < 0:
                continue
            for j in ids:
                if j == i or not _mono(*O, *xy[i], *xy[j]):
                    continue
                for k in ids:
                    if k in (i, j) or not _mono(*xy[i], *xy[j], *xy[k]):
                        continue
                    if not is_monotone([O, xy[i], xy[j], xy[k]]):
                        continue
                    q = [p for p in ids if p not in (i, j, k)]
                    yield "S6-case1", {-1: [i, j, k, q[0]], i: [q[1]], j: [q[2]]}
        # Case 2: monotone paths (p0, pi, pj)
        pairs = [(i, j) for i in ids for j in ids if i != j and _mono(*O, *xy[i], *xy[j])]
        if pairs:
            pairs.sort(key=lambda ij: (-xy[ij[1]][0], abs(xy[ij[0]][1]), ij))
            i, j = pairs[0]
            rest = [p for p in ids if p not in (i, j)]
            for start in (i, j):
                for p, p2 in permutations(rest, 2):
                    q = [r for r in rest if r not in (p, p2)]
                    for q1, q2 in (q, q[::-1]):
                        if start == i:
                            plan = {-1: [i, j, q1], i: [p, p2], j: [q2]}
                        else:
                            plan = {-1: [i, j, p, p2], j: [q1], i: [q2]}
                        yield "S6-case2a", plan
            ks = sorted(rest, key=lambda r: (-xy[r][0], r))
            for k in ks:
                others = [r for r in rest if r != k]
                for lab in product(range(3), repeat=len(others)):
                    groups = [[r for r, g in zip(others, lab) if g == h] for h in range(3)]
                    for ga in permutations(groups[0]):
                        for gb in permutations(groups[1]):
                            gc = sorted(groups[2], key=lambda r: (-xy[r][0], r))
                            yield "S6-case2b", {-1: [k, j, *ga], j: [i, *gb], k: gc}
        else:
            # Case 3: wake the rightmost robot, then split above and below
            r = max(ids, key=lambda p: (xy[p][0], -p))
            rest = [p for p in ids if p != r]
            for flip in (False, True):
                up = [p for p in rest if (xy[p][1] > 0 or (xy[p][1] == 0 and not flip))]
                lo = [p for p in rest if p not in up]
                up.sort(key=lambda p: (-xy[p][0], p))
                lo.sort(key=lambda p: (-xy[p][0], p))
                yield "S6-case3", {-1: [r, *up], r: lo}
                yield "S6-case3", {-1: [r, *lo], r: up}


def routes_from_parents(parent, labels):
    """Convert a parent array over nodes 0..m into a route plan keyed by `labels`.

    At every node the robot that arrived continues to the first child and
    the freshly woken robot takes the second one.
    """
    m = len(parent)
    kids = [[] for _ in range(m)]
    for c in range(1, m):
        kids[parent[c]].append(c)
    plan = {}
    owner = {0: -1}
    stack = [0]
    while stack:
        node = stack.pop()
        ks = kids[node]
        movers = [owner[node], labels[node]] if node else [-1]
        for c, robot in zip(ks, movers):
            plan.setdefault(robot, []).append(labels[c])
            owner[c] = robot
            stack.append(c)
    return plan
