"""Wall-clock timing of one deletion step, next to the classical scan cost."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

import numpy as np

from .deletion import apply_deletion_step, classical_average_queries, matched_phase
from .statevector import check_qubits, uniform_state


@dataclass(frozen=True)
class BenchRow:
    n: int
    N: int
    step_seconds: float
    amplitudes_per_second: float
    quantum_queries: int
    classical_avg_queries: float


def warm_up() -> None:
    # triggers (or loads) the compiled butterfly kernels
    state = uniform_state(2, cap=2)
    apply_deletion_step(state, 1, matched_phase(4).phi)


def time_deletion_steps(ns, repetitions: int = 3, cap: int | None = None,
                        min_total: float = 0.25) -> dict[int, float]:
    """Best wall time, in seconds, of one exact deletion step for each n.

    Sizes are timed round-robin so that load from other processes hits all
    of them alike. Each size gets at least ``repetitions`` samples, and cheap
    sizes keep sampling until ``min_total`` seconds have been spent on them.
    """
    ns = list(ns)
    for n in ns:
        check_qubits(n, cap)
    if repetitions < 1:
        raise ValueError(f"repetitions must be >= 1, got {repetitions}")
    warm_up()
    best = {n: math.inf for n in ns}
    spent = dict.fromkeys(ns, 0.0)
    per_round = min_total / repetitions
    for round_ in range(repetitions):
        for n in ns:
            state = uniform_state(n, cap=cap)
            phi = matched_phase(1 << n).phi
            tau = (1 << n) - 1
            budget = per_round if round_ < repetitions - 1 else min_total - spent[n]
            taken = 0
            while taken == 0 or budget > 0:
                start = time.perf_counter()
                apply_deletion_step(state, tau, phi)
                elapsed = time.perf_counter() - start
                best[n] = min(best[n], elapsed)
                spent[n] += elapsed
                budget -= elapsed
                taken += 1
            del state
    return best


def bench(ns, repetitions: int = 3, cap: int | None = None, min_total: float = 0.25) -> list[BenchRow]:
    ns = list(ns)
    timings = time_deletion_steps(ns, repetitions, cap, min_total)
    rows = []
    for n in ns:
        N = 1 << n
        seconds = timings[n]
        rows.append(BenchRow(n, N, seconds, N / seconds, 1, classical_average_queries(N)))
    return rows


def loglog_slope(sizes, seconds) -> float:
    """Least-squares slope of log(time) against log(N)."""
    x = np.log(np.asarray(sizes, dtype=float))
    y = np.log(np.asarray(seconds, dtype=float))
    if x.size < 2:
        raise ValueError("need at least two sizes for a slope")
    return float(np.polyfit(x, y, 1)[0])
