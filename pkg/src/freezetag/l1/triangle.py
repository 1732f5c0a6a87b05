"""Waking every robot of an l1 triangle in two diameters.

Canonical triangle (rotated coordinates): 0 <= v <= u <= 1, right angle at
A=(1,0), hypotenuse from B=(0,0) to C=(1,1).  Midpoints: F=(1/2,0) on AB,
E=(1,1/2) on AC, D=(1/2,1/2) on BC.  Sub-triangles:

    T_B = BDF (u <= 1/2)          T_C = CDE (v >= 1/2)
    T_A = AFE (u - v >= 1/2)      T_0 = DEF (the rest)

with P_B = T_B + T_0 and P_A = T_A + T_0.  A group can start in three ways:
one robot at A ("A"), one robot at B ("B"), or two robots at a common point
of the leg AB ("C").
"""
from __future__ import annotations

from itertools import permutations

from .fleet import Frame, cheb

HALF = 0.5
TOL = 1e-9

# canonical corners and midpoints
_B, _A, _C = (0.0, 0.0), (1.0, 0.0), (1.0, 1.0)
_D, _E, _F = (0.5, 0.5), (1.0, 0.5), (0.5, 0.0)

# sub-triangle placements as (B', C', A'): Case B starts at B', Case A at A'
T_A_FROM_E = (_E, _F, _A)
T_A_FROM_F = (_F, _E, _A)
T_C_FROM_D = (_D, _C, _E)       # also Case A from E, Case C on leg ED
T_C_FROM_C = (_C, _D, _E)       # Case C on leg EC
T_0_FROM_F = (_F, _E, _D)       # Case A from D, Case B from F, Case C on DF
T_0_FROM_E = (_E, _F, _D)       # Case B from E, Case C on DE
T_B_FROM_B = (_B, _D, _F)       # Case A from F
T_B_FROM_D = (_D, _B, _F)
ADF_FROM_D = (_D, _A, _F)
ADE_FROM_D = (_D, _A, _E)


class TriangleWaker:
    """Recursive triangle engine writing into a `Fleet`.

    `trace` (optional list) collects the name of every case taken; it is
    only used by tests and diagnostics.
    """

    def __init__(self, fleet, trace=None):
        self.fleet = fleet
        self.U = fleet.U
        self.V = fleet.V
        self.trace = trace
        self.guard = 0

    # helpers
    def _note(self, name):
        if self.trace is not None:
            self.trace.append(name)

    def _go(self, frame, agent, p):
        u, v = frame.g(p[0], p[1])
        return self.fleet.move(agent, u, v)

    def _wake(self, agent, pt):
        return self.fleet.wake(agent, pt[2])

    def _local(self, frame, ids):
        U, V = self.U, self.V
        ou, ov, s = frame.ou, frame.ov, frame.s
        a, b, c, d = frame.a, frame.b, frame.c, frame.d
        inv = 1.0 / s
        out = []
        for j in ids:
            du = (U[j] - ou) * inv
            dv = (V[j] - ov) * inv
            out.append((a * du + c * dv, b * du + d * dv, j))
        return out

    def _direct(self, agents, pts):
        """Breadth-first wake of at most three points (or of a degenerate group)."""
        first = agents[0]
        pts = sorted(pts, key=lambda p: cheb(first.u, first.v, self.U[p[2]], self.V[p[2]]))
        self.fleet.direct(agents, [p[2] for p in pts])

    # public entry
    def run(self, frame, kind, agents, pts):
        """Wake the points `pts` (local (u, v, id) triples) of the triangle `frame`."""
        if not pts:
            return
        self.guard += 1
        if self.guard > 4 * len(self.U) + 64:
            raise RuntimeError("triangle recursion does not terminate")
        if frame.s <= 1e-15 or len(pts) <= 3 or (kind == "C" and len(pts) <= 3):
            self._note("direct")
            self._direct(agents, pts)
            return
        if kind == "A":
            self._case_a(frame, agents[0], pts)
        elif kind == "B":
            self._case_b(frame, agents[0], pts)
        else:
            self._case_c(frame, agents, pts)

    def sub(self, frame, corners, kind, agents, pts):
        """Recurse into a sub-triangle given by local corners (B', C', A')."""
        if not pts:
            return
        if len(pts) <= 3:
            self._note("direct")
            self._direct(agents, pts)
            return
        child = frame.sub(*corners)
        if child.s <= 1e-15:
            self._note("direct")
            self._direct(agents, pts)
            return
        ids = [p[2] for p in pts]
        self.run(child, kind, agents, self._local(child, ids))

    # Case A: one robot at the right-angle corner
    def _case_a(self, frame, agent, pts):
        self._note("A")
        best = None
        dmin = 2.0
        for p in pts:
            d = 1.0 - p[0]
            if p[1] > d:
                d = p[1]
            if d < dmin:
                dmin, best = d, p
        d = dmin
        spare = self._wake(agent, best)
        lo, hi = [], []
        for p in pts:
            if p is best:
                continue
            in_lo = 1.0 - p[0] >= d
            in_hi = p[1] >= d
            if in_lo and (not in_hi or p[0] + p[1] <= 1.0):
                lo.append(p)
            else:
                hi.append(p)
        e = 1.0 - d
        if lo:
            self._go(frame, agent, (e, 0.0))
            self.sub(frame, ((0.0, 0.0), (e, e), (e, 0.0)), "A", [agent], lo)
        if hi:
            self._go(frame, spare, (1.0, d))
            self.sub(frame, ((d, d), (1.0, 1.0), (1.0, d)), "A", [spare], hi)

    # Case B: one robot at the corner B
    def _case_b(self, frame, agent, pts):
        tA, tC, pB = [], [], []
        for p in pts:
            u, v = p[0], p[1]
            if v > HALF:
                tC.append(p)
            elif u - v > HALF:
                tA.append(p)
            else:
                pB.append(p)
        if not pB:
            return self._b0(frame, agent, pts)
        if len(pB) == 1:
            self._note("B1")
            p1 = pB[0]
            spare = self._wake(agent, p1)
            self._go(frame, agent, _E)
            self._go(frame, spare, _E)
            self.sub(frame, T_A_FROM_E, "B", [agent], tA)
            self.sub(frame, T_C_FROM_D, "A", [spare], tC)
            return
        if len(pB) == 2:
            return self._b2(frame, agent, pB, tA, tC)
        tB, t0 = [], []
        for p in pB:
            (tB if p[0] <= HALF else t0).append(p)
        if len(tB) >= 3:
            return self._b33(frame, agent, tB, t0, tA, tC)
        if len(tB) == 2:
            return self._b32(frame, agent, tB, t0, tA, tC)
        return self._b31(frame, agent, tB, t0, tA, tC)

    def _b0(self, frame, agent, pts):
        self._note("B0")
        best, hbest = None, 3.0
        for p in pts:
            h = p[1] if p[1] > p[0] - p[1] else p[0] - p[1]
            if h < hbest:
                hbest, best = h, p
        h = hbest
        spare = self._wake(agent, best)
        top, right = [], []
        for p in pts:
            if p is best:
                continue
            (top if p[0] - p[1] >= h else right).append(p)
        Cp = (1.0, 1.0 - h)
        Ap = (1.0, h)
        top_corners = (Cp, (h, 0.0), _A)
        right_corners = ((h, h), _C, Ap)
        if best[0] - best[1] >= best[1]:
            # on the top edge: both to C', one continues to A'
            self._go(frame, agent, Cp)
            self._go(frame, spare, Cp)
            self.sub(frame, top_corners, "B", [agent], top)
            if right:
                self._go(frame, spare, Ap)
                self.sub(frame, right_corners, "A", [spare], right)
        else:
            self._go(frame, agent, Ap)
            self._go(frame, spare, Ap)
            self.sub(frame, right_corners, "A", [agent], right)
            if top:
                self._go(frame, spare, Cp)
                self.sub(frame, top_corners, "B", [spare], top)

    def _b2(self, frame, agent, pB, tA, tC):
        p1, p2 = sorted(pB, key=lambda p: (p[0] + p[1], p[2]))
        s1 = self._wake(agent, p1)
        if p2[0] - p1[0] >= abs(p2[1] - p1[1]):
            self._note("B2-monotone")
            s2 = self._wake(agent, p2)
            self._go(frame, agent, _E)
            self._go(frame, s2, _E)
            self.sub(frame, T_A_FROM_E, "B", [agent], tA)
            self.sub(frame, T_C_FROM_D, "A", [s2], tC)
            return
        self._note("B2")
        cu = min(max(p2[0], HALF), 1.0)
        if HALF - p2[1] < abs(cu - p2[0]) - TOL:
            raise RuntimeError("no point C* on DE continues the path monotonically")
        self._go(frame, s1, _E)
        self.sub(frame, T_A_FROM_E, "B", [s1], tA)
        s2 = self._wake(agent, p2)
        self._go(frame, agent, (cu, HALF))
        self._go(frame, s2, (cu, HALF))
        self.sub(frame, T_C_FROM_D, "C", [agent, s2], tC)

    def _b33(self, frame, agent, tB, t0, tA, tC):
        self._note("B3+3+")
        tB = sorted(tB, key=lambda p: (p[0] + p[1], p[2]))
        p1, p2, p3 = tB[:3]
        rest = tB[3:]
        s1 = self._wake(agent, p1)
        s2 = self._wake(agent, p2)
        self._go(frame, agent, _D)
        self._go(frame, s2, _D)
        s3 = self._wake(s1, p3)
        self._go(frame, s1, _D)
        self._go(frame, s3, _D)
        adf, ade = [], []
        for p in t0 + tA:
            (adf if p[0] + p[1] <= 1.0 else ade).append(p)
        self.sub(frame, T_B_FROM_D, "B", [agent], rest)
        self.sub(frame, T_C_FROM_D, "B", [s2], tC)
        self.sub(frame, ADF_FROM_D, "B", [s1], adf)
        self.sub(frame, ADE_FROM_D, "B", [s3], ade)

    def _b32(self, frame, agent, tB, t0, tA, tC):
        self._note("B3+2")
        p1, p2 = sorted(tB, key=lambda p: (p[0] + p[1], p[2]))
        s1 = self._wake(agent, p1)
        self._go(frame, s1, _E)
        self.sub(frame, T_A_FROM_E, "B", [s1], tA)
        s2 = self._wake(agent, p2)
        self._go(frame, agent, _D)
        self._go(frame, s2, _D)
        self.sub(frame, T_0_FROM_F, "A", [agent], t0)
        self.sub(frame, T_C_FROM_D, "B", [s2], tC)

    # Case C: two robots at a common point of the leg AB
    def _case_c(self, frame, agents, pts):
        a, b = agents
        u0 = frame.local(a.u, a.v)[0]
        near = lambda p: (cheb(u0, 0.0, p[0], p[1]), p[2])
        tA, tB, tC, t0 = [], [], [], []
        if u0 <= HALF:
            for p in pts:
                u, v = p[0], p[1]
                if v > HALF:
                    tC.append(p)
                elif u - v > HALF:
                    tA.append(p)
                elif u <= HALF:
                    tB.append(p)
                else:
                    t0.append(p)
            if not tB and not t0:
                self._note("C0-FB")
                self._go(frame, a, _D)
                self.sub(frame, T_C_FROM_D, "B", [a], tC)
                self._go(frame, b, _F)
                self.sub(frame, T_A_FROM_F, "B", [b], tA)
            elif not tB:
                self._note("C1-FB")
                p1 = min(t0, key=near)
                self._go(frame, a, _E)
                s = self._wake(b, p1)
                self._go(frame, b, _E)
                self._go(frame, s, _E)
                self.sub(frame, T_A_FROM_E, "B", [a], tA)
                self.sub(frame, T_0_FROM_E, "B", [b], [p for p in t0 if p is not p1])
                self.sub(frame, T_C_FROM_D, "A", [s], tC)
            elif len(tB) == 1:
                self._note("C2-FB")
                self._go(frame, a, _F)
                self.sub(frame, T_A_FROM_F, "B", [a], tA)
                s = self._wake(b, tB[0])
                self._go(frame, b, _D)
                self._go(frame, s, _D)
                self.sub(frame, T_0_FROM_F, "A", [b], t0)
                self.sub(frame, T_C_FROM_D, "B", [s], tC)
            else:
                self._note("C3-FB")
                p1, p2 = sorted(tB, key=near)[:2]
                s1 = self._wake(a, p1)
                s2 = self._wake(b, p2)
                for r in (a, b):
                    self._go(frame, r, _F)
                for r in (s1, s2):
                    self._go(frame, r, _D)
                self.sub(frame, T_A_FROM_F, "B", [a], tA)
                self.sub(frame, T_B_FROM_B, "A", [b], [p for p in tB if p is not p1 and p is not p2])
                self.sub(frame, T_0_FROM_F, "A", [s1], t0)
                self.sub(frame, T_C_FROM_D, "B", [s2], tC)
            return
        for p in pts:
            u, v = p[0], p[1]
            if v > HALF:
                tC.append(p)
            elif u < HALF:
                tB.append(p)
            elif u - v > HALF:
                tA.append(p)
            else:
                t0.append(p)
        if not tA and not t0:
            self._note("C0-AF")
            self._go(frame, a, _E)
            self.sub(frame, T_C_FROM_D, "A", [a], tC)
            self._go(frame, b, _F)
            self.sub(frame, T_B_FROM_B, "A", [b], tB)
        elif not tA:
            self._note("C1-AF")
            self._go(frame, a, _F)
            self.sub(frame, T_B_FROM_B, "A", [a], tB)
            p1 = min(t0, key=near)
            s = self._wake(b, p1)
            self._go(frame, b, _D)
            self._go(frame, s, _D)
            self.sub(frame, T_0_FROM_F, "A", [b], [p for p in t0 if p is not p1])
            self.sub(frame, T_C_FROM_D, "B", [s], tC)
        elif len(tA) == 1:
            self._note("C2-AF")
            self._go(frame, a, _E)
            self.sub(frame, T_C_FROM_D, "A", [a], tC)
            s = self._wake(b, tA[0])
            self._go(frame, b, _F)
            self._go(frame, s, _F)
            self.sub(frame, T_B_FROM_B, "A", [b], tB)
            self.sub(frame, T_0_FROM_F, "B", [s], t0)
        else:
            self._note("C3-AF")
            p1, p2 = sorted(tA, key=near)[:2]
            s1 = self._wake(a, p1)
            s2 = self._wake(b, p2)
            for r in (a, b):
                self._go(frame, r, _F)
            for r in (s1, s2):
                self._go(frame, r, _E)
            self.sub(frame, T_B_FROM_B, "A", [a], tB)
            self.sub(frame, T_0_FROM_F, "B", [b], t0)
            self.sub(frame, T_A_FROM_E, "B", [s1], [p for p in tA if p is not p1 and p is not p2])
            self.sub(frame, T_C_FROM_D, "A", [s2], tC)

    # B3+1-: at most one point in T_B, at least two in T_0
    def _b31(self, frame, agent, tB, t0, tA, tC):
        t = tB[0] if tB else None
        for name, make in (
            ("B3+1-inc", self._plan_inc),
            ("B3+1-chain", self._plan_chain),
            ("B3+1-t-inc", self._plan_t_inc),
            ("B3+1-t-split", self._plan_t_split),
            ("B3+1-t-down", self._plan_t_down),
            ("B3+1-t-chain", self._plan_t_chain),
            ("B3+1-t-diag", self._plan_t_diag),
        ):
            plan = make(t, t0)
            if plan is not None:
                self._note(name)
                plan(frame, agent, tA, tC)
                return
        plan = search_plan(t, t0, tA, tC)
        if plan is None:
            raise RuntimeError("no admissible plan for a sparse P_B configuration")
        self._note("B3+1-search")
        self._execute(frame, agent, plan, t, t0, tA, tC)

    def _plan_inc(self, t, Q):
        if t is not None:
            return None
        pair = _forward_pair(Q)
        if pair is None:
            return None
        a, b = pair

        def run(frame, agent, tA, tC):
            sa = self._wake(agent, a)
            sb = self._wake(agent, b)
            for r in (agent, sa, sb):
                self._go(frame, r, _E)
            rest = [p for p in Q if p is not a and p is not b]
            self.sub(frame, T_A_FROM_E, "B", [agent], tA)
            self.sub(frame, T_C_FROM_D, "A", [sb], tC)
            self.sub(frame, T_0_FROM_E, "B", [sa], rest)

        return run

    def _plan_chain(self, t, Q):
        if t is not None:
            return None
        chain = sorted(Q, key=lambda p: (p[1], p[0], p[2]))
        return self._climb(None, chain)

    def _climb(self, t, chain):
        """Walk t (optional) then a vertical chain up to DE; the first spare takes T_A."""
        seq = ([t] if t is not None else []) + list(chain)

        def run(frame, agent, tA, tC):
            spare = self._wake(agent, seq[0])
            last = spare
            for p in seq[1:]:
                last = self._wake(agent, p)
            self._go(frame, spare, _E)
            self.sub(frame, T_A_FROM_E, "B", [spare], tA)
            if tC:
                top = seq[-1]
                x = (min(max(top[0], HALF), 1.0), HALF)
                self._go(frame, agent, x)
                self._go(frame, last, x)
                self.sub(frame, T_C_FROM_D, "C", [agent, last], tC)

        return run

    def _plan_t_inc(self, t, Q):
        if t is None:
            return None
        fwd = [q for q in Q if q[0] - t[0] >= abs(q[1] - t[1])]
        if not fwd:
            return None
        q = min(fwd, key=lambda p: (p[0], p[2]))

        def run(frame, agent, tA, tC):
            st = self._wake(agent, t)
            sq = self._wake(agent, q)
            self._go(frame, agent, _E)
            self._go(frame, sq, _E)
            self._go(frame, st, _D)
            self.sub(frame, T_A_FROM_E, "B", [agent], tA)
            self.sub(frame, T_C_FROM_D, "A", [sq], tC)
            self.sub(frame, T_0_FROM_F, "A", [st], [p for p in Q if p is not q])

        return run

    def _split_cones(self, t, Q):
        up = [q for q in Q if q[1] > t[1]]
        down = [q for q in Q if q[1] <= t[1]]
        return up, down

    def _plan_t_split(self, t, Q):
        if t is None:
            return None
        up, down = self._split_cones(t, Q)
        if not up or not down:
            return None
        a = min(up, key=lambda p: (p[1], p[2]))
        b = max(down, key=lambda p: (p[1], p[2]))

        def run(frame, agent, tA, tC):
            st = self._wake(agent, t)
            sa = self._wake(agent, a)
            x = (a[0], HALF)
            self._go(frame, agent, x)
            self._go(frame, sa, x)
            self.sub(frame, T_C_FROM_D, "C", [agent, sa], tC)
            sb = self._wake(st, b)
            self._go(frame, st, _F)
            self._go(frame, sb, _F)
            self.sub(frame, T_A_FROM_F, "B", [st], tA)
            self.sub(frame, T_0_FROM_F, "B", [sb], [p for p in Q if p is not a and p is not b])

        return run

    def _plan_t_down(self, t, Q):
        if t is None:
            return None
        up, down = self._split_cones(t, Q)
        if up:
            return None
        b = max(down, key=lambda p: (p[1], p[2]))

        def run(frame, agent, tA, tC):
            st = self._wake(agent, t)
            sb = self._wake(agent, b)
            self._go(frame, agent, _F)
            self._go(frame, sb, _F)
            self.sub(frame, T_A_FROM_F, "B", [agent], tA)
            self.sub(frame, T_0_FROM_F, "B", [sb], [p for p in Q if p is not b])
            self._go(frame, st, _D)
            self.sub(frame, T_C_FROM_D, "B", [st], tC)

        return run

    def _plan_t_chain(self, t, Q):
        if t is None:
            return None
        up, down = self._split_cones(t, Q)
        if down:
            return None
        chain = sorted(Q, key=lambda p: (p[1], p[0], p[2]))
        if _forward_pair(chain) is not None:
            return None
        return self._climb(t, chain)

    def _plan_t_diag(self, t, Q):
        if t is None:
            return None
        low = [q for q in Q if q[0] + q[1] <= 1.0 and q[1] - t[1] >= abs(q[0] - t[0])]
        if not low:
            return None
        a = min(low, key=lambda p: (p[1], p[2]))

        def run(frame, agent, tA, tC):
            st = self._wake(agent, t)
            sa = self._wake(agent, a)
            self._go(frame, agent, _D)
            self._go(frame, sa, _D)
            self.sub(frame, T_C_FROM_D, "B", [agent], tC)
            self.sub(frame, T_0_FROM_F, "A", [sa], [p for p in Q if p is not a])
            self._go(frame, st, _E)
            self.sub(frame, T_A_FROM_E, "B", [st], tA)

        return run

    def _execute(self, frame, agent, plan, t, Q, tA, tC):
        prewakes, jobs = plan
        robots = [agent]
        for k, p in prewakes:
            robots.append(self._wake(robots[k], p))
        for job in jobs:
            kind, rids, tri, pts = job
            rs = [robots[k] for k in rids]
            if kind == "single":
                self._wake(rs[0], pts[0])
                continue
            if kind == "direct":
                p1 = tri
                s = self._wake(rs[0], p1)
                others = [p for p in pts if p is not p1]
                for r, p in zip((rs[0], s), others):
                    self._wake(r, p)
                continue
            corners, start, port = tri
            for r in rs:
                self._go(frame, r, port)
            self.sub(frame, corners, start, rs, pts)


def _forward_pair(Q):
    """A pair (a, b) with b in the forward cone of a, or None when Q is a vertical chain."""
    if len(Q) < 2:
        return None
    srt = sorted(Q, key=lambda p: (p[1], p[0], p[2]))
    for a, b in zip(srt, srt[1:]):
        du = b[0] - a[0]
        dv = b[1] - a[1]
        if abs(du) >= dv:
            return (a, b) if du >= 0 else (b, a)
    return None


# generic plan search for the sparse case


def _bounding(pts):
    """Minimal enclosing right-isosceles triangles in the four orientations.

    Returns (corner, su, sv, size): points are corner + (su*a, sv*b) with
    a, b >= 0 and a + b <= size.
    """
    us = [p[0] for p in pts]
    vs = [p[1] for p in pts]
    out = []
    for su in (1, -1):
        ru = min(us) if su > 0 else max(us)
        for sv in (1, -1):
            rv = min(vs) if sv > 0 else max(vs)
            size = max(su * (p[0] - ru) + sv * (p[1] - rv) for p in pts)
            out.append(((ru, rv), su, sv, size))
    return out


_FIXED = {
    "A": [((1.0, 0.0), -1, 1, 0.5)],
    "C": [((1.0, 0.5), -1, 1, 0.5)],
    "R": [((0.5, 0.5), 1, -1, 0.5)],
}


def _ports(tri):
    """Start ports of a triangle: (kind, corners, point or leg)."""
    (ru, rv), su, sv, s = tri
    R = (ru, rv)
    X = (ru + su * s, rv)
    Y = (ru, rv + sv * s)
    out = [
        ("A", (X, Y, R), R),
        ("B", (X, Y, R), X),
        ("B", (Y, X, R), Y),
        ("C", (X, Y, R), (R, X)),
        ("C", (Y, X, R), (R, Y)),
    ]
    return out


def _leg_point(p, leg):
    (au, av), (bu, bv) = leg
    if av == bv:
        lo, hi = min(au, bu), max(au, bu)
        return (min(max(p[0], lo), hi), av)
    lo, hi = min(av, bv), max(av, bv)
    return (au, min(max(p[1], lo), hi))


def _options(pts, fixed):
    tris = _bounding(pts) + fixed
    return [(tri[3], port) for tri in tris for port in _ports(tri)]


def _best_single(pos, time, pts, opts):
    """Cheapest single-robot job for `pts` from (pos, time): (finish bound, job spec) or None."""
    if len(pts) == 1:
        q = pts[0]
        return time + cheb(pos[0], pos[1], q[0], q[1]), ("single", pts[0])
    best = None
    if len(pts) <= 3:
        for p1 in pts:
            reach = time + cheb(pos[0], pos[1], p1[0], p1[1])
            far = max(cheb(p1[0], p1[1], q[0], q[1]) for q in pts if q is not p1)
            if best is None or reach + far < best[0]:
                best = (reach + far, ("direct", p1))
    for size, (kind, corners, where) in opts:
        if kind == "C":
            continue
        fin = time + cheb(pos[0], pos[1], where[0], where[1]) + 2 * size
        if best is None or fin < best[0]:
            best = (fin, ("tri", (corners, kind, where)))
    return best


def _best_pair(pos, time, pts, opts):
    best = None
    for size, (kind, corners, where) in opts:
        if kind != "C":
            continue
        x = _leg_point(pos, where)
        fin = time + cheb(pos[0], pos[1], x[0], x[1]) + 2 * size
        if best is None or fin < best[0]:
            best = (fin, ("tri", (corners, "C", x)))
    return best


def search_plan(t, Q, tA, tC, limit=2.0 + 1e-12, max_candidates=7):
    """Search small pre-phase trees plus job assignments meeting the deadline.

    Returns (prewakes, jobs) or None.  `prewakes` is a list of (robot index,
    point); robot 0 is the start robot at B and each wake appends one robot.
    `jobs` lists (kind, robot indices, spec, points).
    """
    cands = []
    if t is not None:
        cands.append(t)
    keyed = [
        sorted(Q, key=lambda p: p[0]),
        sorted(Q, key=lambda p: p[1]),
        sorted(Q, key=lambda p: -p[1]),
        sorted(Q, key=lambda p: p[0] + p[1]),
        sorted(Q, key=lambda p: p[1] - p[0]),
        sorted(Q, key=lambda p: p[0] - p[1]),
    ]
    depth = 0
    while len(cands) < max_candidates and depth < len(Q):
        for lst in keyed:
            if lst[depth] not in cands and len(cands) < max_candidates:
                cands.append(lst[depth])
        depth += 1
    fixedA = _options(tA, _FIXED["A"]) if len(tA) > 1 else None
    fixedC = _options(tC, _FIXED["C"]) if len(tC) > 1 else None
    shapes = [[0], [0, 0], [0, 0, 0], [0, 0, 1], [0, 0, 2]]
    for shape in shapes:
        k = len(shape)
        for combo in permutations(cands, k):
            robots = [((0.0, 0.0), 0.0)]
            pre = []
            for who, p in zip(shape, combo):
                pos, time = robots[who]
                time += cheb(pos[0], pos[1], p[0], p[1])
                robots[who] = ((p[0], p[1]), time)
                robots.append(((p[0], p[1]), time))
                pre.append((who, p))
            if max(r[1] for r in robots) > limit:
                continue
            woken = set(id(p) for p in combo)
            rest = [q for q in Q if id(q) not in woken]
            tasks = []
            if tA:
                tasks.append((tA, fixedA if fixedA is not None else []))
            if tC:
                tasks.append((tC, fixedC if fixedC is not None else []))
            if rest:
                tasks.append((rest, _options(rest, _FIXED["R"]) if len(rest) > 1 else []))
            if t is not None and id(t) not in woken:
                tasks.append(([t], []))
            jobs = _assign(robots, tasks, limit)
            if jobs is not None:
                return pre, jobs
    return None


def _assign(robots, tasks, limit):
    n = len(robots)
    single = [[None] * len(tasks) for _ in range(n)]
    for r, (pos, time) in enumerate(robots):
        for k, (pts, opts) in enumerate(tasks):
            b = _best_single(pos, time, pts, opts)
            if b is not None and b[0] <= limit:
                single[r][k] = b[1]
    pairs = {}
    for r1 in range(n):
        for r2 in range(r1 + 1, n):
            if robots[r1] == robots[r2]:
                for k, (pts, opts) in enumerate(tasks):
                    if len(pts) <= 1:
                        continue
                    b = _best_pair(robots[r1][0], robots[r1][1], pts, opts)
                    if b is not None and b[0] <= limit:
                        pairs[(r1, r2, k)] = b[1]

    used = [False] * n
    out = []

    def rec(k):
        if k == len(tasks):
            return True
        pts = tasks[k][0]
        for r in range(n):
            if not used[r] and single[r][k] is not None:
                used[r] = True
                out.append(_job(single[r][k], [r], pts))
                if rec(k + 1):
                    return True
                out.pop()
                used[r] = False
        for (r1, r2, kk), spec in pairs.items():
            if kk == k and not used[r1] and not used[r2]:
                used[r1] = used[r2] = True
                out.append(_job(spec, [r1, r2], pts))
                if rec(k + 1):
                    return True
                out.pop()
                used[r1] = used[r2] = False
        return False

    return list(out) if rec(0) else None


def _job(spec, rids, pts):
    kind, data = spec
    if kind == "single":
        return ("single", rids, None, pts)
    if kind == "direct":
        return ("direct", rids, data, pts)
    corners, start, where = data
    return ("tri", rids, (corners, start, where), pts)
