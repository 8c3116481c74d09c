"""Aggregation of replicate results and nonparametric arm comparison.

The Mann-Whitney U here is self-contained: an exact tail probability from
the classical no-ties count recurrence when both sides have at most 20
observations and the pooled sample is tie-free, otherwise a tie-corrected
normal approximation (no continuity correction, so identical samples give
p = 1 exactly). U is reported for the first sample, counting pairs where it
exceeds the second (ties count 1/2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import InvalidParameterError
from .engine import ReplicateResult

EXACT_MAX_N = 20


def first_hit_iteration(fitness_trace) -> int | None:
    """Smallest index whose fitness is 0, or None if the goal never appears."""
    arr = np.asarray(fitness_trace)
    if arr.size == 0:
        raise InvalidParameterError("empty fitness trace")
    zeros = np.flatnonzero(arr == 0)
    return int(zeros[0]) if zeros.size else None


@dataclass
class ArmSummary:
    """Replicate-level statistics for one (design x tendency) arm."""

    label: str
    n: int
    successes: int
    success_rate: float
    median_group_convergence: float          # nan when no replicate converged
    mean_group_convergence: float
    iqr_low: float
    iqr_high: float
    median_first_any_hit: float
    curve_best: np.ndarray                   # (T,), iterations 1..T
    curve_mean: np.ndarray


def convergence_values(results: list[ReplicateResult]) -> list[int]:
    return [r.group_convergence for r in results if r.group_convergence is not None]


def censored_values(results: list[ReplicateResult]) -> list[int]:
    """Group convergence with never-converged replicates counted at the budget."""
    return [r.group_convergence if r.group_convergence is not None
            else r.max_iterations for r in results]


def _padded_curves(results: list[ReplicateResult]) -> tuple[np.ndarray, np.ndarray]:
    horizon = max(r.max_iterations for r in results)
    best = np.empty((len(results), horizon))
    mean = np.empty((len(results), horizon))
    for i, r in enumerate(results):
        nb = r.trace_best.size
        if nb:
            best[i, :nb] = r.trace_best
            mean[i, :nb] = r.trace_mean
            best[i, nb:] = r.trace_best[-1]
            mean[i, nb:] = r.trace_mean[-1]
        else:
            best[i, :] = r.initial_best
            mean[i, :] = r.initial_mean
    return best.mean(axis=0), mean.mean(axis=0)


def aggregate_arm(results: list[ReplicateResult], label: str) -> ArmSummary:
    """Summarize an arm's replicates.

    Never-converged replicates are excluded from the central-tendency
    statistics and surface only in the success rate. Medians use the
    midpoint rule for even counts; the IQR uses linear interpolation.
    """
    if not results:
        raise InvalidParameterError("aggregate_arm needs at least one result")
    conv = convergence_values(results)
    hits = [r.first_any_hit for r in results if r.first_any_hit is not None]
    curve_best, curve_mean = _padded_curves(results)
    nan = float("nan")
    return ArmSummary(
        label=label,
        n=len(results),
        successes=len(conv),
        success_rate=len(conv) / len(results),
        median_group_convergence=float(np.median(conv)) if conv else nan,
        mean_group_convergence=float(np.mean(conv)) if conv else nan,
        iqr_low=float(np.percentile(conv, 25)) if conv else nan,
        iqr_high=float(np.percentile(conv, 75)) if conv else nan,
        median_first_any_hit=float(np.median(hits)) if hits else nan,
        curve_best=curve_best,
        curve_mean=curve_mean,
    )


def _midranks(pooled: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Fractional ranks (ties get the mean rank) and per-value tie counts."""
    _, inverse, counts = np.unique(pooled, return_inverse=True, return_counts=True)
    upper = np.cumsum(counts)
    mid = upper - (counts - 1) / 2.0
    return mid[inverse], counts


@lru_cache(maxsize=None)
def _u_tail_counts(m: int, n: int) -> tuple[int, ...]:
    """Count of tie-free arrangements of m+n values with U(first side) = u.

    Recurrence on the largest pooled value: if it belongs to the first side
    it beats all n of the second, otherwise it contributes nothing:
    N(u; m, n) = N(u - n; m - 1, n) + N(u; m, n - 1).
    """
    table: dict[tuple[int, int], list[int]] = {}
    for i in range(m + 1):
        for j in range(n + 1):
            if i == 0 or j == 0:
                table[(i, j)] = [1]
                continue
            size = i * j + 1
            left = table[(i - 1, j)]
            down = table[(i, j - 1)]
            row = [0] * size
            for u in range(size):
                if u - j >= 0 and u - j < len(left):
                    row[u] += left[u - j]
                if u < len(down):
                    row[u] += down[u]
            table[(i, j)] = row
    return tuple(table[(m, n)])


def _normal_sf(x: float) -> float:
    return math.erfc(x / math.sqrt(2.0)) / 2.0


@dataclass
class MannWhitneyResult:
    u_statistic: float
    p_value: float
    method: str


def mann_whitney_u(a, b) -> MannWhitneyResult:
    """Two-sided Mann-Whitney U test of two independent samples."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.size == 0 or b.size == 0:
        raise InvalidParameterError("mann_whitney_u requires non-empty samples")
    m, n = a.size, b.size
    ranks, tie_counts = _midranks(np.concatenate([a, b]))
    u_a = float(ranks[:m].sum() - m * (m + 1) / 2.0)

    tie_free = bool((tie_counts == 1).all())
    if tie_free and m <= EXACT_MAX_N and n <= EXACT_MAX_N:
        counts = _u_tail_counts(m, n)
        total = sum(counts)
        u = int(round(u_a))
        u_lo, u_hi = min(u, m * n - u), max(u, m * n - u)
        p = (sum(counts[:u_lo + 1]) + sum(counts[u_hi:])) / total
        return MannWhitneyResult(u_a, min(1.0, p), "exact")

    mu = m * n / 2.0
    total_n = m + n
    tie_term = float(((tie_counts ** 3) - tie_counts).sum()) / (total_n * (total_n - 1))
    var = m * n / 12.0 * ((total_n + 1) - tie_term)
    if var <= 0:
        return MannWhitneyResult(u_a, 1.0, "normal")
    z = (u_a - mu) / math.sqrt(var)
    return MannWhitneyResult(u_a, min(1.0, 2.0 * _normal_sf(abs(z))), "normal")


@dataclass
class ArmComparison:
    median_ratio: float
    u_statistic: float
    p_value: float
    method: str


def compare_arms(a, b) -> ArmComparison:
    """Compare two arms' group-convergence samples (successful replicates only).

    ``median_ratio`` is median(a) / median(b); ratios below 1 mean arm a
    self-organizes faster.
    """
    a = list(a)
    b = list(b)
    if not a or not b:
        raise InvalidParameterError("compare_arms requires non-empty samples")
    ma, mb = float(np.median(a)), float(np.median(b))
    if mb == 0.0:
        ratio = 1.0 if ma == 0.0 else float("inf")
    else:
        ratio = ma / mb
    test = mann_whitney_u(a, b)
    return ArmComparison(ratio, test.u_statistic, test.p_value, test.method)
