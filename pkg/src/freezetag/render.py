"""Deterministic SVG drawings of wake-up trees.

The instance disk is drawn at 512 px per radius.  Each edge is a polyline
ending in an arrowhead; where both robots leaving a node travel together
before splitting, the common stretch is drawn once with a thick stroke.
"""
from __future__ import annotations

import numpy as np

from .core import Instance, WakeupTree

PX = 512.0
MARGIN = 24.0
THIN = 1.5
THICK = 4.5
_TOL = 1e-12


def disk_outline(norm, samples=256):
    """Unit circle of `norm` as an anticlockwise polygon."""
    if norm.is_polygonal:
        return np.asarray(norm.boundary_vertices, dtype=float)
    s = np.linspace(0.0, norm.perimeter, samples, endpoint=False)
    return norm.arc_point(s)


def _common_prefix(a, b, tol):
    # number of leading points shared by two polylines
    k = 0
    m = min(len(a), len(b))
    while k < m and np.max(np.abs(a[k] - b[k])) <= tol:
        k += 1
    return k


def split_paths(tree: WakeupTree):
    """Return (shared, single) lists of polylines; single ones carry their target node."""
    kids = tree.children()
    scale = float(np.max(np.abs(tree.positions))) if len(tree.positions) else 1.0
    tol = _TOL * max(scale, 1.0)
    shared, single = [], []
    for p in range(len(kids)):
        ch = sorted(kids[p])
        paths = [tree.edge_path(c) for c in ch]
        start = 0
        if len(ch) == 2:
            k = _common_prefix(paths[0], paths[1], tol)
            # the prefix always holds the parent itself; a shared stretch needs two points
            if k >= 2 and k < min(len(paths[0]), len(paths[1])):
                shared.append(paths[0][:k])
                start = k - 1
        for c, path in zip(ch, paths):
            single.append((c, path[start:]))
    return shared, single


def _pts(P):
    return " ".join(f"{x:.3f},{y:.3f}" for x, y in P)


def render_svg(tree: WakeupTree, instance: Instance, title: str | None = None) -> str:
    r = instance.radius or 1.0
    c = instance.p0
    half = PX + MARGIN
    size = 2 * half

    def tr(P):
        P = np.atleast_2d(np.asarray(P, dtype=float))
        return np.column_stack([half + (P[:, 0] - c[0]) / r * PX, half - (P[:, 1] - c[1]) / r * PX])

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size:.0f}" height="{size:.0f}" '
        f'viewBox="0 0 {size:.0f} {size:.0f}">',
        "<defs>",
        '<marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="7" markerHeight="7" '
        'orient="auto-start-reverse" markerUnits="userSpaceOnUse">',
        '<path d="M0,0 L10,5 L0,10 z" fill="#333"/>',
        "</marker>",
        "</defs>",
        f'<rect width="{size:.0f}" height="{size:.0f}" fill="white"/>',
    ]
    if title:
        out.append(f'<title>{_escape(title)}</title>')
    ring = disk_outline(instance.norm) * r + c
    out.append(f'<polygon points="{_pts(tr(ring))}" fill="none" stroke="#999" stroke-width="1"/>')
    shared, single = split_paths(tree)
    for P in shared:
        out.append(f'<polyline points="{_pts(tr(P))}" fill="none" stroke="#333" stroke-width="{THICK}" '
                   'stroke-linejoin="round" stroke-linecap="round"/>')
    for node, P in single:
        if len(P) < 2 or np.all(P[0] == P[-1]) and len(P) == 2:
            continue
        out.append(f'<polyline data-node="{node}" points="{_pts(tr(P))}" fill="none" stroke="#333" '
                   f'stroke-width="{THIN}" stroke-linejoin="round" marker-end="url(#arrow)"/>')
    Q = tr(instance.sleepers) if instance.n else np.zeros((0, 2))
    for x, y in Q:
        out.append(f'<circle cx="{x:.3f}" cy="{y:.3f}" r="4" fill="#1f77b4"/>')
    x, y = tr(c)[0]
    out.append(f'<rect x="{x - 5:.3f}" y="{y - 5:.3f}" width="10" height="10" fill="#d62728"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _escape(s):
    return s.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
