"""Benchmark runs: one BenchRecord per (strategy, n, seed), written as CSV with figures beside it."""
from __future__ import annotations

import csv
import io
import os
import statistics
import time
from dataclasses import asdict, dataclass, fields

from .core import validate
from .generators import generate
from .io import write_atomic
from .norms import EPS
from . import strategies


@dataclass(frozen=True)
class BenchRecord:
    strategy_name: str
    n: int
    norm: str
    makespan: float
    claimed_bound: float
    construct_time_ns: int
    seed: int

    @property
    def within_bound(self):
        return self.makespan <= self.claimed_bound + 1e-6


class BoundViolation(RuntimeError):
    pass


def run_one(name, inst, seed, repeat=1, eps=EPS, **opts) -> BenchRecord:
    """Run `name` `repeat` times; the time kept is the median."""
    times = []
    rep = None
    for _ in range(max(1, repeat)):
        t0 = time.perf_counter_ns()
        rep = strategies.run(name, inst, **opts)
        times.append(time.perf_counter_ns() - t0)
    errs = validate(rep.tree, inst, eps)
    if errs:
        raise BoundViolation(f"{name} n={inst.n} seed={seed}: invalid tree: {errs[0]}")
    rec = BenchRecord(name, inst.n, inst.norm.label, rep.makespan, float(rep.claimed_bound),
                      int(statistics.median(times)), seed)
    if not rec.within_bound:
        raise BoundViolation(f"{name} n={inst.n} seed={seed}: makespan {rec.makespan:.9g} > bound {rec.claimed_bound:.9g}")
    return rec


def run_bench(names, sizes, norm, seeds=(0,), kind="random_disk", repeat=1, eps=EPS, **opts):
    out = []
    for n in sizes:
        for seed in seeds:
            inst = generate(kind, {"n": n}, seed, norm)
            for name in names:
                out.append(run_one(name, inst, seed, repeat, eps, **opts))
    return out


def to_csv(records) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, [f.name for f in fields(BenchRecord)], lineterminator="\n")
    w.writeheader()
    for r in records:
        row = asdict(r)
        row["makespan"] = f"{r.makespan:.17g}"
        row["claimed_bound"] = f"{r.claimed_bound:.17g}"
        w.writerow(row)
    return buf.getvalue()


def read_csv(path):
    with open(path, newline="") as f:
        return [BenchRecord(r["strategy_name"], int(r["n"]), r["norm"], float(r["makespan"]),
                            float(r["claimed_bound"]), int(r["construct_time_ns"]), int(r["seed"]))
                for r in csv.DictReader(f)]


def time_ratios(records):
    """Per strategy: median time at each n divided by the median at the previous n."""
    by = {}
    for r in records:
        by.setdefault(r.strategy_name, {}).setdefault(r.n, []).append(r.construct_time_ns)
    out = {}
    for name, d in by.items():
        ns = sorted(d)
        med = [statistics.median(d[n]) for n in ns]
        out[name] = [(ns[i], med[i] / med[i - 1]) for i in range(1, len(ns))]
    return out


def plot(records, stem):
    """Write <stem>_time.png and <stem>_makespan.png; returns the paths."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    by = {}
    for r in records:
        by.setdefault(r.strategy_name, []).append(r)
    paths = []
    fig, ax = plt.subplots(figsize=(6, 4))
    for name in sorted(by):
        rs = sorted(by[name], key=lambda r: r.n)
        ns = sorted({r.n for r in rs})
        med = [statistics.median([r.construct_time_ns for r in rs if r.n == n]) / 1e9 for n in ns]
        ax.loglog(ns, med, "o-", label=name)
    ax.set_xlabel("n")
    ax.set_ylabel("construction time [s]")
    ax.legend()
    fig.tight_layout()
    paths.append(_save(fig, stem + "_time.png"))
    plt.close(fig)

    fig, ax = plt.subplots(figsize=(6, 4))
    for name in sorted(by):
        rs = sorted(by[name], key=lambda r: r.n)
        ax.semilogx([r.n for r in rs], [r.makespan for r in rs], "o", label=f"{name} makespan")
        ax.semilogx([r.n for r in rs], [r.claimed_bound for r in rs], "_", ms=12, label=f"{name} bound")
    ax.set_xlabel("n")
    ax.set_ylabel("time to wake all")
    ax.legend(fontsize=7)
    fig.tight_layout()
    paths.append(_save(fig, stem + "_makespan.png"))
    plt.close(fig)
    return paths


def _save(fig, path):
    buf = io.BytesIO()
    # fixed metadata keeps the bytes stable between runs
    fig.savefig(buf, format="png", dpi=100, metadata={"Software": None})
    write_atomic(path, buf.getvalue())
    return path


def write_report(records, csv_path):
    write_atomic(csv_path, to_csv(records))
    stem = os.path.splitext(os.fspath(csv_path))[0]
    return [csv_path] + plot(records, stem)
