"""Planar norms, unit-circle arc arithmetic, cones and the constants Lambda and pi.

A norm is either an l_p norm (1 <= p <= inf) or a polygonal norm whose unit
circle is a centrally symmetric convex polygon.  Every norm carries a boundary
table used to measure arc length along its unit circle; arcs run anticlockwise
and the arc parameter of the point in direction (1, 0) is zero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

EPS = 1e-9
CONST_TOL = 1e-6


class InvalidInputError(ValueError):
    """Raised on malformed inputs (non-finite coordinates, bad norm data)."""


class DomainError(ValueError):
    """Raised when an argument lies outside an operation's domain."""


def _as_points(p):
    arr = np.asarray(p, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError("coordinates must be finite")
    return arr


class Norm:
    """A symmetric convex norm on the plane.

    Build through the named constructors (`Norm.l1()`, `Norm.lp(3)`,
    `Norm.polygon(vertices)`, ...).  Instances are immutable and hashable by
    their defining data.
    """

    def __init__(self, kind, p=None, vertices=None):
        if kind == "lp":
            p = float(p)
            if not (p >= 1.0):
                raise InvalidInputError(f"l_p needs p >= 1, got {p}")
            self.kind = "lp"
            self.p = p
            self.vertices = None
        elif kind == "polygon":
            self.kind = "polygon"
            self.p = None
            self.vertices = _check_polygon(vertices)
        else:
            raise InvalidInputError(f"unknown norm kind {kind!r}")

    # constructors
    @classmethod
    def lp(cls, p):
        return cls("lp", p=p)

    @classmethod
    def l1(cls):
        return cls("lp", p=1.0)

    @classmethod
    def l2(cls):
        return cls("lp", p=2.0)

    @classmethod
    def linf(cls):
        return cls("lp", p=math.inf)

    @classmethod
    def polygon(cls, vertices):
        return cls("polygon", vertices=vertices)

    @classmethod
    def regular_polygon(cls, k, phase=0.0):
        """Regular k-gon (k even) with circumradius 1."""
        if k % 2 or k < 4:
            raise InvalidInputError("a symmetric regular polygon needs an even k >= 4")
        ang = phase + 2 * math.pi * np.arange(k) / k
        return cls.polygon(np.column_stack([np.cos(ang), np.sin(ang)]))

    # identity
    def _key(self):
        if self.kind == "lp":
            return ("lp", self.p)
        return ("polygon", tuple(np.round(self.vertices, 15).ravel()))

    def __eq__(self, other):
        return isinstance(other, Norm) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        if self.kind == "lp":
            return f"Norm.lp({self.p:g})"
        return f"Norm.polygon({len(self.vertices)} vertices)"

    @property
    def label(self):
        if self.kind == "lp":
            if self.p == 1.0:
                return "l1"
            if self.p == 2.0:
                return "l2"
            if math.isinf(self.p):
                return "linf"
            return f"lp{self.p:g}"
        return f"polygon{len(self.vertices)}"

    @property
    def is_l1(self):
        return self.kind == "lp" and self.p == 1.0

    @property
    def is_polygonal(self):
        return self.kind == "polygon" or self.p == 1.0 or math.isinf(self.p)

    # evaluation
    @cached_property
    def _facets(self):
        """Rows a_i with unit disk = {x : a_i . x <= 1} (polygonal norms)."""
        V = self.boundary_vertices
        W = np.roll(V, -1, axis=0)
        normals = np.column_stack([W[:, 1] - V[:, 1], V[:, 0] - W[:, 0]])
        scale = np.einsum("ij,ij->i", normals, V)
        return normals / scale[:, None]

    @cached_property
    def boundary_vertices(self):
        """Polygon vertices of the unit circle, anticlockwise (polygonal norms only)."""
        if self.kind == "polygon":
            return self.vertices
        if self.p == 1.0:
            return np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, 0.0], [0.0, -1.0]])
        if math.isinf(self.p):
            return np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])
        raise AttributeError("smooth l_p norms have no vertices")

    def __call__(self, v):
        """Norm of a vector or of each row of an (m, 2) array."""
        v = np.asarray(v, dtype=float)
        x, y = np.abs(v[..., 0]), np.abs(v[..., 1])
        if self.kind == "polygon":
            return np.max(v @ self._facets.T, axis=-1) if v.ndim > 1 else float(np.max(self._facets @ v))
        p = self.p
        if p == 1.0:
            out = x + y
        elif p == 2.0:
            out = np.hypot(x, y)
        elif math.isinf(p):
            out = np.maximum(x, y)
        else:
            m = np.maximum(x, y)
            safe = np.where(m > 0, m, 1.0)
            out = m * ((x / safe) ** p + (y / safe) ** p) ** (1.0 / p)
        return float(out) if np.ndim(out) == 0 else out

    def dist(self, u, v):
        u, v = _as_points(u), _as_points(v)
        return self(v - u)

    # constants
    @cached_property
    def Lambda(self):
        """Half perimeter of the largest parallelogram inscribed in the unit disk."""
        if self.kind == "lp":
            q = 0.0 if math.isinf(self.p) else 1.0 / self.p
            return 2.0 ** (1.0 + max(q, 1.0 - q))
        # u, v on the boundary; the objective is convex in each, so the sup
        # over the disk is reached at a pair of vertices.
        V = self.vertices
        S = V[:, None, :] + V[None, :, :]
        D = V[:, None, :] - V[None, :, :]
        vals = self(S.reshape(-1, 2)) + self(D.reshape(-1, 2))
        return float(np.max(vals))

    @cached_property
    def half_circumference(self):
        """pi(eta): half the length of the unit circle measured in the norm itself."""
        if self.kind == "lp" and self.p == 2.0:
            return math.pi
        return self._table[2][-1] / 2.0

    @property
    def perimeter(self):
        return 2.0 * self.half_circumference

    # boundary table: angles, points and cumulative arc length
    @cached_property
    def _table(self):
        if self.is_polygonal:
            V = self.boundary_vertices
            start = np.array([1.0 / self(np.array([1.0, 0.0])), 0.0])
            ang = np.mod(np.arctan2(V[:, 1], V[:, 0]), 2 * math.pi)
            order = np.argsort(ang)
            V, ang = V[order], ang[order]
            keep = ang > 1e-15
            pts = np.vstack([start, V[keep], start])
            th = np.concatenate([[0.0], ang[keep], [2 * math.pi]])
        else:
            th, pts = _lp_quarter_samples(self)
            # mirror the first quadrant to the full circle
            q2 = pts[::-1][1:] * np.array([-1.0, 1.0])
            half = np.vstack([pts, q2])
            low = half[::-1][1:] * np.array([1.0, -1.0])
            pts = np.vstack([half, low])
            th = np.mod(np.arctan2(pts[:, 1], pts[:, 0]), 2 * math.pi)
            th[-1] = 2 * math.pi
        seg = self(np.diff(pts, axis=0))
        cum = np.concatenate([[0.0], np.cumsum(seg)])
        return th, pts, cum

    def arc_param(self, p):
        """Arc length from the (1,0)-direction boundary point to direction p, anticlockwise."""
        p = np.asarray(p, dtype=float)
        single = p.ndim == 1
        P = np.atleast_2d(p)
        theta = np.mod(np.arctan2(P[:, 1], P[:, 0]), 2 * math.pi)
        if self.kind == "lp" and self.p == 2.0:
            out = theta
        else:
            th, pts, cum = self._table
            k = np.clip(np.searchsorted(th, theta, side="right") - 1, 0, len(th) - 2)
            a, b = pts[k], pts[k + 1]
            d = np.column_stack([np.cos(theta), np.sin(theta)])
            delta = b - a
            num = -(d[:, 0] * a[:, 1] - d[:, 1] * a[:, 0])
            den = d[:, 0] * delta[:, 1] - d[:, 1] * delta[:, 0]
            tau = np.clip(num / den, 0.0, 1.0)
            out = cum[k] + tau * (cum[k + 1] - cum[k])
        return float(out[0]) if single else out

    def arc_point(self, s):
        """Unit-circle point at arc parameter s (taken modulo the perimeter)."""
        s = np.asarray(s, dtype=float)
        single = s.ndim == 0
        s = np.mod(np.atleast_1d(s), self.perimeter)
        if self.kind == "lp" and self.p == 2.0:
            out = np.column_stack([np.cos(s), np.sin(s)])
        else:
            th, pts, cum = self._table
            k = np.clip(np.searchsorted(cum, s, side="right") - 1, 0, len(cum) - 2)
            tau = (s - cum[k]) / (cum[k + 1] - cum[k])
            out = pts[k] + tau[:, None] * (pts[k + 1] - pts[k])
            if not self.is_polygonal:
                out = out / self(out)[:, None]
        return out[0] if single else out


def _check_polygon(vertices):
    V = _as_points(vertices)
    if V.ndim != 2 or V.shape[1] != 2 or len(V) < 4:
        raise InvalidInputError("polygon norm needs at least 4 vertices")
    if len(V) % 2:
        raise InvalidInputError("a centrally symmetric polygon has an even vertex count")
    if np.any(np.hypot(V[:, 0], V[:, 1]) < EPS):
        raise InvalidInputError("polygon vertex at the origin")
    scale = np.max(np.abs(V))
    for v in V:
        if np.min(np.max(np.abs(V + v), axis=1)) > 1e-9 * scale:
            raise InvalidInputError("polygon is not centrally symmetric")
    W = np.roll(V, -1, axis=0)
    X = np.roll(V, -2, axis=0)
    cross = (W[:, 0] - V[:, 0]) * (X[:, 1] - W[:, 1]) - (W[:, 1] - V[:, 1]) * (X[:, 0] - W[:, 0])
    if np.any(cross <= 0):
        raise InvalidInputError("polygon must be strictly convex and anticlockwise")
    turn = np.sum(np.diff(np.unwrap(np.arctan2(np.append(V[:, 1], V[0, 1]), np.append(V[:, 0], V[0, 0])))))
    if abs(turn - 2 * math.pi) > 1e-6:
        raise InvalidInputError("polygon must wind once around the origin")
    V = V.copy()
    V.setflags(write=False)
    return V


def _lp_quarter_samples(norm, tol=1e-10):
    """Adaptive chordal sampling of the first-quadrant arc of an l_p circle.

    An interval is accepted once splitting it changes the polyline length by
    less than `tol`; intervals are visited left to right.
    """

    def point(t):
        d = np.array([math.cos(t), math.sin(t)])
        return d / norm(d)

    ts, ps = [0.0], [point(0.0)]
    stack = [(0.0, math.pi / 2, ps[0], point(math.pi / 2))]
    while stack:
        a, b, pa, pb = stack.pop()
        m = 0.5 * (a + b)
        pm = point(m)
        gain = norm(pm - pa) + norm(pb - pm) - norm(pb - pa)
        if gain < tol or b - a < 1e-9:
            ts.append(b)
            ps.append(pb)
        else:
            stack.append((m, b, pm, pb))
            stack.append((a, m, pa, pm))
    return np.array(ts), np.vstack(ps)


def dist(norm, u, v):
    """Norm distance from u to v."""
    return norm.dist(u, v)


def half_parallelogram_perimeter(norm):
    return norm.Lambda


def half_circumference(norm):
    return norm.half_circumference


def _check_on_circle(norm, A):
    A = _as_points(A)
    if abs(norm(A) - 1.0) > EPS:
        raise DomainError(f"point {tuple(A)} is not on the unit circle")
    return A


def arc_length(norm, A, B):
    """Length of the anticlockwise arc from A to B on the unit circle."""
    a, b = norm.arc_param(A), norm.arc_param(B)
    return float(np.mod(b - a, norm.perimeter))


def arc_walk(norm, A, w):
    """Point reached from A by walking anticlockwise an arc of length w."""
    A = _check_on_circle(norm, A)
    if not (0.0 <= w < norm.perimeter):
        raise DomainError(f"arc length {w} outside [0, {norm.perimeter})")
    if w == 0.0:
        return A.copy()
    return norm.arc_point(norm.arc_param(A) + w)


@dataclass(frozen=True, eq=False)
class Cone:
    """Sector of the unit disk spanned by the arc of length w anticlockwise from `start`."""

    start: np.ndarray
    arc_length: float
    norm: Norm

    def __post_init__(self):
        start = _check_on_circle(self.norm, self.start)
        if not (0.0 <= self.arc_length < self.norm.perimeter):
            raise DomainError("cone arc length must lie in [0, 2 pi(eta))")
        object.__setattr__(self, "start", start)

    @classmethod
    def from_params(cls, norm, s0, w):
        """Cone whose start has arc parameter s0."""
        return cls(norm.arc_point(s0), w, norm)

    @cached_property
    def start_param(self):
        return self.norm.arc_param(self.start)

    def offsets(self, pts):
        """Anticlockwise arc offset of each point's direction from the start."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        off = np.mod(self.norm.arc_param(pts) - self.start_param, self.norm.perimeter)
        # snap values just below a full turn back to zero
        off = np.where(off > self.norm.perimeter - EPS, 0.0, off)
        zero = np.max(np.abs(pts), axis=1) <= EPS
        return np.where(zero, 0.0, off)

    def contains_many(self, pts):
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        if np.any(self.norm(pts) > 1.0 + EPS):
            raise DomainError("point outside the unit disk")
        return self.offsets(pts) <= self.arc_length + EPS

    def contains(self, p):
        return bool(self.contains_many(p)[0])


def cone_contains(cone, p):
    return cone.contains(p)
