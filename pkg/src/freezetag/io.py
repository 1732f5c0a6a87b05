"""Plain-text instance and tree files.

Instance file::

    norm <l1|l2|linf|lp P|polygon k x1 y1 ... xk yk>
    n
    x0 y0        # the awake robot
    x1 y1
    ...

Tree file: one line per node, ``idx parent wake_time k`` followed by the
2k coordinates of the intermediate waypoints of the edge into ``idx``.
Numbers are written with 17 significant digits so a round trip is exact.
"""
from __future__ import annotations

import math
import os
import tempfile

import numpy as np

from .core import Instance, WakeupTree
from .norms import InvalidInputError, Norm


class ParseError(InvalidInputError):
    def __init__(self, msg, line=None, col=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {col}" if col is not None else "") + ": "
        super().__init__(where + msg)
        self.line = line
        self.col = col


def fmt(x: float) -> str:
    return f"{float(x):.17g}"


def emit_norm(norm: Norm) -> str:
    if norm.kind == "lp":
        p = norm.p
        if p == 1.0:
            return "norm l1"
        if p == 2.0:
            return "norm l2"
        if math.isinf(p):
            return "norm linf"
        return f"norm lp {fmt(p)}"
    V = norm.vertices
    return "norm polygon " + " ".join([str(len(V))] + [fmt(c) for c in V.ravel()])


def _num(tok, line, col, allow_inf=False):
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(f"expected a number, got {tok!r}", line, col) from None
    if math.isnan(v) or (math.isinf(v) and not allow_inf):
        raise ParseError(f"non-finite number {tok!r}", line, col)
    return v


def parse_norm(text: str, line=1) -> Norm:
    tok = text.split()
    if not tok or tok[0] != "norm":
        raise ParseError("expected 'norm <kind>' header", line, 1)
    if len(tok) < 2:
        raise ParseError("missing norm kind", line, 2)
    kind = tok[1]
    try:
        if kind in ("l1", "l2", "linf"):
            if len(tok) != 2:
                raise ParseError(f"unexpected token after {kind}", line, 3)
            return {"l1": Norm.l1, "l2": Norm.l2, "linf": Norm.linf}[kind]()
        if kind == "lp":
            if len(tok) != 3:
                raise ParseError("lp needs exactly one parameter P", line, 3)
            return Norm.lp(_num(tok[2], line, 3, allow_inf=True))
        if kind == "polygon":
            if len(tok) < 3:
                raise ParseError("polygon needs a vertex count", line, 3)
            try:
                k = int(tok[2])
            except ValueError:
                raise ParseError(f"bad vertex count {tok[2]!r}", line, 3) from None
            vals = tok[3:]
            if len(vals) != 2 * k:
                raise ParseError(f"polygon with {k} vertices needs {2 * k} coordinates, got {len(vals)}", line)
            xs = [_num(t, line, 4 + i) for i, t in enumerate(vals)]
            return Norm.polygon(np.array(xs).reshape(k, 2))
    except ParseError:
        raise
    except InvalidInputError as e:
        raise ParseError(str(e), line) from None
    raise ParseError(f"unknown norm {kind!r}", line, 2)


def _lines(text):
    # keep line numbers; drop blank lines and '#' comments
    for i, raw in enumerate(text.split("\n"), 1):
        s = raw.split("#", 1)[0].strip()
        if s:
            yield i, s


def parse_instance(text: str) -> Instance:
    rows = list(_lines(text))
    if not rows:
        raise ParseError("empty instance file")
    ln, head = rows[0]
    norm = parse_norm(head, ln)
    if len(rows) < 2:
        raise ParseError("missing sleeper count", ln + 1)
    ln, cnt = rows[1]
    try:
        n = int(cnt)
    except ValueError:
        raise ParseError(f"bad sleeper count {cnt!r}", ln, 1) from None
    if n < 0:
        raise ParseError("sleeper count must be non-negative", ln, 1)
    pts = rows[2:]
    if len(pts) != n + 1:
        raise ParseError(f"expected {n + 1} points, got {len(pts)}", pts[-1][0] if pts else ln)
    P = np.empty((n + 1, 2))
    for k, (ln, s) in enumerate(pts):
        tok = s.split()
        if len(tok) != 2:
            raise ParseError(f"expected 2 coordinates, got {len(tok)}", ln)
        for c in range(2):
            try:
                v = float(tok[c])
            except ValueError:
                raise ParseError(f"non-numeric coordinate {tok[c]!r}", ln, c + 1) from None
            if not math.isfinite(v):
                raise ParseError(f"non-finite coordinate {tok[c]!r}", ln, c + 1)
            P[k, c] = v
    return Instance(norm, P[0], P[1:])


def emit_instance(inst: Instance) -> str:
    out = [emit_norm(inst.norm), str(inst.n)]
    out += [f"{fmt(x)} {fmt(y)}" for x, y in inst.positions.tolist()]
    return "\n".join(out) + "\n"


def emit_tree(tree: WakeupTree) -> str:
    out = []
    par = tree.parent.tolist()
    wt = tree.wake_time.tolist()
    for i in range(len(par)):
        mid = tree.waypoints.get(i)
        k = 0 if mid is None else len(mid)
        row = [str(i), str(par[i]), fmt(wt[i]), str(k)]
        if k:
            row += [fmt(c) for c in np.asarray(mid).ravel()]
        out.append(" ".join(row))
    return "\n".join(out) + "\n"


def parse_tree(text: str, instance: Instance) -> WakeupTree:
    """Read a tree file for `instance`, keeping the wake times as written (check with `validate`)."""
    rows = list(_lines(text))
    n = instance.n
    if len(rows) != n + 1:
        raise ParseError(f"expected {n + 1} tree lines, got {len(rows)}")
    parent = np.full(n + 1, -2, dtype=np.int64)
    wake = np.zeros(n + 1)
    waypoints = {}
    for ln, s in rows:
        tok = s.split()
        if len(tok) < 4:
            raise ParseError("expected 'idx parent wake_time k ...'", ln)
        try:
            i, p, k = int(tok[0]), int(tok[1]), int(tok[3])
        except ValueError:
            raise ParseError("idx, parent and k must be integers", ln) from None
        t = _num(tok[2], ln, 3)
        if not 0 <= i <= n:
            raise ParseError(f"node index {i} out of range", ln, 1)
        if parent[i] != -2:
            raise ParseError(f"node {i} listed twice", ln, 1)
        if len(tok) != 4 + 2 * k:
            raise ParseError(f"expected {2 * k} waypoint coordinates, got {len(tok) - 4}", ln)
        parent[i] = p
        wake[i] = t
        if k:
            waypoints[i] = np.array([_num(x, ln, 5 + j) for j, x in enumerate(tok[4:])]).reshape(k, 2)
    return WakeupTree(instance.positions, parent, wake, waypoints)


def write_atomic(path, data: str | bytes):
    """Write through a temporary file in the same directory, then rename."""
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, mode) as f:
            f.write(data)
        # mkstemp creates 0600; give the usual umask-based mode instead
        mask = os.umask(0)
        os.umask(mask)
        os.chmod(tmp, 0o666 & ~mask)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
