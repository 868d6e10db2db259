"""Run metrics: cache-hit rate, its time series, and source load reduction.

Every Interest received by a router leaves one sample ``h``: 1 when it was
answered from the Content Store or aggregated in the PIT, 0 otherwise. The
cache-hit rate over a window is the mean of the samples that fall in it.
"""

import math
from collections import Counter

from popnetcod.domain.models.metrics import InterestOutcome, MetricsLog

HIT_OUTCOMES = frozenset({InterestOutcome.CS_HIT, InterestOutcome.AGGREGATED})


def record_interest_outcome(log: MetricsLog, router: str, outcome: InterestOutcome, t: float) -> None:
    log.hit_samples.setdefault(router, []).append((t, 1 if outcome in HIT_OUTCOMES else 0))
    log.outcomes.setdefault(router, Counter())[outcome] += 1


def cache_hit_rate(log: MetricsLog, router: str, t: float, window: float) -> float | None:
    """Mean of ``router``'s samples with ``t <= time < t + window``; None when there are none.

    Raises:
        ValueError: If ``window`` is not positive.
    """
    if window <= 0:
        raise ValueError("window must be positive")
    samples = [h for ts, h in log.hit_samples.get(router, ()) if t <= ts < t + window]
    if not samples:
        return None
    return sum(samples) / len(samples)


def overall_hit_rate(log: MetricsLog, router: str) -> float | None:
    """Mean of every sample of ``router`` over the whole run."""
    samples = log.hit_samples.get(router)
    if not samples:
        return None
    return sum(h for _, h in samples) / len(samples)


def cache_hit_series(log: MetricsLog, router: str, window: float) -> list[tuple[float, float]]:
    """Hit rate over consecutive windows of length ``window`` from time 0; empty windows are skipped."""
    if window <= 0:
        raise ValueError("window must be positive")
    hits: Counter[int] = Counter()
    totals: Counter[int] = Counter()
    for ts, h in log.hit_samples.get(router, ()):
        k = math.floor(ts / window)
        totals[k] += 1
        hits[k] += h
    return [(k * window, hits[k] / totals[k]) for k in sorted(totals)]


def load_reduction(log: MetricsLog) -> float | None:
    """``1 - sent_by_source / received_by_clients``; None when clients received nothing."""
    if log.client_received == 0:
        return None
    return 1.0 - log.source_sent / log.client_received
