"""Instance generators; all points lie in the unit disk of the chosen norm, p0 at the origin."""
from __future__ import annotations

import numpy as np

from .core import Instance
from .exact import circle_points, square13_6
from .norms import InvalidInputError, Norm

KINDS = ("uniform_circle", "random_disk", "cross4", "square13_6")


def _box(norm):
    # half-width of a square holding the unit disk
    pts = norm.arc_point(np.linspace(0.0, norm.perimeter, 2049))
    return float(np.max(np.abs(pts))) * (1 + 1e-9)


def random_disk(n, norm, rng):
    """n points uniform (by area) in the unit disk, by rejection from a bounding square."""
    b = _box(norm)
    out = np.empty((0, 2))
    while len(out) < n:
        m = max(16, int(1.3 * (n - len(out))))
        cand = rng.uniform(-b, b, (m, 2))
        out = np.vstack([out, cand[norm(cand) <= 1.0]])
    return out[:n]


def generate(kind: str, params: dict | None = None, seed: int | None = 0, norm: Norm | None = None) -> Instance:
    params = dict(params or {})
    if kind not in KINDS:
        raise InvalidInputError(f"unknown generator {kind!r}; choose from {', '.join(KINDS)}")
    if kind == "square13_6":
        if norm is not None and not norm.is_l1:
            raise InvalidInputError("square13_6 is an l1 instance")
        return square13_6(float(params.get("eps", 1.0 / 6.0)))
    norm = norm or (Norm.l1() if kind == "cross4" else Norm.l2())
    if kind == "cross4":
        D = np.array([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]])
        return Instance(norm, (0.0, 0.0), D / norm(D)[:, None])
    n = params.get("n")
    if n is None or int(n) != n or n < 0:
        raise InvalidInputError(f"{kind} needs a non-negative integer n")
    n = int(n)
    if kind == "uniform_circle":
        pts = circle_points(n, norm) if n else np.zeros((0, 2))
        return Instance(norm, (0.0, 0.0), pts)
    rng = np.random.default_rng(seed)
    return Instance(norm, (0.0, 0.0), random_disk(n, norm, rng))
