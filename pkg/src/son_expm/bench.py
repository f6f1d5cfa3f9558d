"""Per-call timings of the closed form against both oracles."""
from __future__ import annotations

import time

import numpy as np

from .closed_expm import expm_so
from .errors import DomainError
from .reference_oracles import expm_companion, expm_taylor
from .sampling import ensemble
from .skew_basis import AlgebraVector

METHODS = {"closed": expm_so, "taylor": expm_taylor, "companion": expm_companion}
MIN_REPETITIONS = 100


def _time_calls(fn, vectors):
    out, times = [], np.empty(len(vectors))
    for i, av in enumerate(vectors):
        t0 = time.perf_counter()
        out.append(fn(av))
        times[i] = time.perf_counter() - t0
    return out, times


def bench_n(n: int, repetitions: int = MIN_REPETITIONS, seed: int = 0) -> dict:
    vectors = [AlgebraVector(n, v) for v in ensemble(n, repetitions, seed)]
    results, timings = {}, {}
    for name, fn in METHODS.items():
        results[name], t = _time_calls(fn, vectors)
        timings[name] = {"median_us": float(np.median(t) * 1e6),
                         "p95_us": float(np.percentile(t, 95) * 1e6)}
    names = list(METHODS)
    sentinel = 0.0
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            for Ra, Rb in zip(results[a], results[b]):
                sentinel = max(sentinel, float(np.linalg.norm(Ra - Rb)))
    return {"n": n, "repetitions": repetitions, "methods": timings,
            "max_deviation": sentinel}


def run_bench(ns=range(4, 10), repetitions: int = MIN_REPETITIONS, seed: int = 0) -> dict:
    """Timing report with a max pairwise Frobenius deviation per n."""
    if repetitions < MIN_REPETITIONS:
        raise DomainError(f"repetitions must be >= {MIN_REPETITIONS}")
    rows = [bench_n(int(n), repetitions, seed) for n in ns]
    return {"seed": seed, "results": rows,
            "max_deviation": max(r["max_deviation"] for r in rows)}
