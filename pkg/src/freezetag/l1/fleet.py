"""Robot bookkeeping for the constructive l1 algorithm.

All internal geometry uses rotated coordinates U = x + y, V = x - y, in which
the l1 distance becomes max(|dU|, |dV|).  Every region of the algorithm
(squares, triangles) is then an axis-aligned shape, and a `Frame` maps a
canonical copy of it onto its actual placement.
"""
from __future__ import annotations

import numpy as np

from ..core import Leg, Schedule


def to_uv(xy):
    xy = np.asarray(xy, dtype=float)
    return np.stack([xy[..., 0] + xy[..., 1], xy[..., 0] - xy[..., 1]], axis=-1)


def to_xy(uv):
    uv = np.asarray(uv, dtype=float)
    return np.stack([(uv[..., 0] + uv[..., 1]) / 2, (uv[..., 0] - uv[..., 1]) / 2], axis=-1)


def cheb(au, av, bu, bv):
    du = au - bu
    dv = av - bv
    if du < 0:
        du = -du
    if dv < 0:
        dv = -dv
    return du if du > dv else dv


class Frame:
    """Similarity global = O + s * M @ local with M a signed permutation.

    For triangles the canonical copy is 0 <= v <= u <= 1 with B=(0,0),
    A=(1,0) (right angle) and C=(1,1); for squares it is [0,1]^2 with the
    start corner at the origin.
    """

    __slots__ = ("ou", "ov", "s", "a", "b", "c", "d")

    def __init__(self, ou, ov, s, a, b, c, d):
        self.ou, self.ov, self.s = ou, ov, s
        self.a, self.b, self.c, self.d = a, b, c, d

    @classmethod
    def from_corners(cls, B, C, A):
        """Triangle frame from global corners (right angle at A)."""
        du, dv = A[0] - B[0], A[1] - B[1]
        s = max(abs(du), abs(dv))
        if s == 0.0:
            return cls(B[0], B[1], 0.0, 1, 0, 0, 1)
        eu, ev = C[0] - A[0], C[1] - A[1]
        # the second axis is perpendicular to the first; only its sign is read from C
        if abs(du) >= abs(dv):
            a, c = _sgn(du), 0
            b, d = 0, _sgn(ev)
        else:
            a, c = 0, _sgn(dv)
            b, d = _sgn(eu), 0
        return cls(B[0], B[1], s, a, b, c, d)

    def g(self, u, v):
        """Local to global."""
        s = self.s
        return (self.ou + s * (self.a * u + self.b * v), self.ov + s * (self.c * u + self.d * v))

    def local(self, U, V):
        """Global to local."""
        du = (U - self.ou) / self.s
        dv = (V - self.ov) / self.s
        return (self.a * du + self.c * dv, self.b * du + self.d * dv)

    def sub(self, B, C, A):
        """Child triangle frame from corners given in this frame's local coordinates."""
        return Frame.from_corners(self.g(*B), self.g(*C), self.g(*A))


def _sgn(x):
    return 1 if x > 0 else -1


class Agent:
    """An awake robot: current node, position (U, V), clock and open leg."""

    __slots__ = ("key", "u", "v", "t", "leg_t", "leg", "legs")

    def __init__(self, key, u, v, t):
        self.key = key
        self.u, self.v, self.t = u, v, t
        self.leg_t = t
        self.leg = [(u, v)]
        self.legs = []


class Fleet:
    """Builds a schedule by moving agents and waking targets.

    Targets are indexed 0..m-1 with rotated coordinates U[j], V[j].  Each
    agent is one robot; waking target j leaves the waker at j and returns a
    fresh agent there.
    """

    def __init__(self, U, V):
        self.U = U
        self.V = V
        m = len(U)
        self.wake_time = [None] * m
        self.order = []
        self.agents = []
        self.starts = []

    def start(self, u, v, t=0.0):
        a = Agent(("start", len(self.starts)), u, v, t)
        self.starts.append((u, v, t))
        self.agents.append(a)
        return a

    def move(self, a, u, v):
        if u == a.u and v == a.v:
            return a
        a.t += cheb(a.u, a.v, u, v)
        a.u, a.v = u, v
        a.leg.append((u, v))
        return a

    def wake(self, a, j):
        if self.wake_time[j] is not None:
            raise RuntimeError(f"target {j} woken twice")
        u, v = self.U[j], self.V[j]
        du = u - a.u if u > a.u else a.u - u
        dv = v - a.v if v > a.v else a.v - v
        t = a.t + (du if du > dv else dv)
        a.t = t
        a.u, a.v = u, v
        a.leg.append((u, v))
        a.legs.append((a.leg_t, a.leg, j))
        a.leg_t = t
        a.leg = [(u, v)]
        self.wake_time[j] = t
        self.order.append(j)
        b = Agent(("woken", j), u, v, t)
        self.agents.append(b)
        return b

    def schedule(self, p0=(0.0, 0.0)):
        """Schedule in (x, y) coordinates, translated by p0."""
        if any(t is None for t in self.wake_time):
            missing = [j for j, t in enumerate(self.wake_time) if t is None]
            raise RuntimeError(f"targets never woken: {missing[:10]}")
        off = np.asarray(p0, dtype=float)
        routes = {}
        for a in self.agents:
            legs = []
            for t, pts, j in a.legs:
                legs.append(Leg(t, to_xy(np.array(pts)) + off, j))
            if len(a.leg) > 1:
                legs.append(Leg(a.leg_t, to_xy(np.array(a.leg)) + off, None))
            if legs:
                routes[a.key] = tuple(legs)
        starts = to_xy(np.array([(u, v) for u, v, _ in self.starts]).reshape(-1, 2)) + off
        targets = to_xy(np.column_stack([self.U, self.V]).reshape(-1, 2)) + off
        return Schedule(
            starts=starts,
            start_times=np.array([t for _, _, t in self.starts]),
            targets=targets,
            wake_time=np.array(self.wake_time, dtype=float),
            routes=routes,
        )

    def tree_arrays(self):
        """Parent array over nodes 0..m (node 0 = the single start robot) and waypoints in (U, V)."""
        m = len(self.U)
        parent = [-1] * (m + 1)
        waypoints = {}
        for a in self.agents:
            node = 0 if a.key[0] == "start" else a.key[1] + 1
            for _, pts, j in a.legs:
                parent[j + 1] = node
                if len(pts) > 2:
                    waypoints[j + 1] = pts[1:-1]
                node = j + 1
        return parent, waypoints

    def direct(self, agents, ids):
        """Wake `ids` breadth-first from `agents` (used for tiny or degenerate groups)."""
        queue = list(agents)
        k = 0
        for j in ids:
            a = queue[k]
            k += 1
            b = self.wake(a, j)
            queue.append(a)
            queue.append(b)
        return queue
