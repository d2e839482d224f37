"""Naive-versus-staged benchmark with operation counts and log-log slope fits.

Everything except the ``timing`` sub-dictionaries is a deterministic function
of the arguments, so two runs with the same seed agree byte for byte once
those are dropped.
"""
from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from typing import Sequence

import numpy as np

from .diagrams import PartitionDiagram, enumerate_diagrams
from .kernels import OpCounter, TensorVector, matrix_mult, op_report
from .oracle import dense_matrix, naive_mult
from .validation import check_group

__all__ = ["run_bench", "loglog_slope", "strip_timing"]


def loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float | None:
    """Least-squares slope of ``log y`` against ``log x``; None if any y <= 0."""
    if len(xs) < 2 or any(y <= 0 for y in ys):
        return None
    slope, _ = np.polyfit(np.log(xs), np.log(ys), 1)
    return float(slope)


def strip_timing(report):
    """Copy of ``report`` with every ``timing`` entry removed."""
    if isinstance(report, dict):
        return {k: strip_timing(v) for k, v in report.items() if k != "timing"}
    if isinstance(report, list):
        return [strip_timing(v) for v in report]
    return report


def _best_of(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(max(1, repeats)):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def _pick(candidates: list[PartitionDiagram], count: int | None, rng: np.random.Generator):
    if count is None or count >= len(candidates):
        return candidates
    chosen = sorted(rng.choice(len(candidates), size=count, replace=False).tolist())
    return [candidates[i] for i in chosen]


def _run_case(g, d: PartitionDiagram, v: np.ndarray, repeats: int, check_oracle: bool) -> dict:
    tv = TensorVector(g.n, d.k, v)
    fast_counter, naive_counter = OpCounter(), OpCounter()
    fast = matrix_mult(g, d, tv, fast_counter)
    M = dense_matrix(g, d)
    naive = naive_mult(M, tv, naive_counter, out_order=d.l)
    record = {
        "group": g.group.value,
        "n": g.n,
        "k": d.k,
        "l": d.l,
        "diagram": str(d),
        "naive_ops": op_report(naive_counter)["total"],
        "fast_ops": op_report(fast_counter)["total"],
        "oracle_match": bool(np.array_equal(fast.coeffs, naive.coeffs)) if check_oracle else None,
        "timing": {
            "naive_seconds": _best_of(lambda: M @ v, repeats),
            "fast_seconds": _best_of(lambda: matrix_mult(g, d, tv), repeats),
        },
    }
    return record


def run_bench(
    group,
    k: int,
    l: int,
    n_list: Sequence[int],
    repeats: int = 3,
    seed: int = 0,
    check_oracle: bool = False,
    num_diagrams: int | None = 4,
    diagrams: Sequence[PartitionDiagram] | None = None,
    max_workers: int | None = None,
) -> dict:
    """Benchmark every selected diagram at every ``n`` in ``n_list``.

    Without explicit ``diagrams``, up to ``num_diagrams`` diagrams are drawn
    once, with a generator seeded by ``seed``, from those admissible at
    every ``n``.  Input vectors
    are seeded integers in ``[-9, 9]``.  The dense matrix is built before
    the naive timing starts.
    """
    rng = np.random.default_rng(seed)
    specs = [check_group(group, n) for n in n_list]
    if diagrams is None:
        # Sample once from the diagrams admissible at every n so slopes compare like with like.
        bases = [set(enumerate_diagrams(g, k, l)) for g in specs]
        common = sorted(set.intersection(*bases), key=lambda d: d.blocks) if bases else []
        diagrams = _pick(common, num_diagrams, rng)
    jobs = []
    for g in specs:
        for d in diagrams:
            jobs.append((g, d, rng.integers(-9, 10, size=g.n**k)))

    def run(job):
        return _run_case(*job, repeats, check_oracle)

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            cases = list(pool.map(run, jobs))
    else:
        cases = [run(job) for job in jobs]

    by_diagram: dict[str, list[dict]] = {}
    for case in cases:
        by_diagram.setdefault(case["diagram"], []).append(case)
    slopes = []
    for name, rows in by_diagram.items():
        if len({r["n"] for r in rows}) != len(n_list) or len(n_list) < 2:
            continue
        ns = [r["n"] for r in rows]
        fast_formal = [r["fast_ops"]["formal_multiplications"] for r in rows]
        fast_total = [r["fast_ops"]["formal_multiplications"] + r["fast_ops"]["formal_additions"] for r in rows]
        slopes.append(
            {
                "diagram": name,
                "fast_formal_multiplications": loglog_slope(ns, fast_formal),
                "fast_formal_ops": loglog_slope(ns, fast_total),
                "naive_multiplications": loglog_slope(ns, [r["naive_ops"]["multiplications"] for r in rows]),
                "timing": {
                    "fast_seconds": loglog_slope(ns, [r["timing"]["fast_seconds"] for r in rows]),
                    "naive_seconds": loglog_slope(ns, [r["timing"]["naive_seconds"] for r in rows]),
                },
            }
        )
    return {
        "group": specs[0].group.value if specs else str(group),
        "k": k,
        "l": l,
        "n_list": list(n_list),
        "seed": seed,
        "cases": cases,
        "slopes": slopes,
        "all_oracle_match": all(c["oracle_match"] for c in cases) if check_oracle else None,
    }
