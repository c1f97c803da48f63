"""Small statistics helpers for Monte Carlo checks."""
from __future__ import annotations

import math

import numpy as np

Z = 3.0


def binomial_slack(p: float, trials: int, z: float = Z) -> float:
    """``z`` standard errors of a frequency estimate with success rate ``p``."""
    if trials <= 0:
        return math.inf
    return z * math.sqrt(max(p * (1 - p), 0.0) / trials)


def wilson_interval(successes: int, trials: int, z: float = Z) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    ph = successes / trials
    denom = 1 + z * z / trials
    mid = (ph + z * z / (2 * trials)) / denom
    half = z * math.sqrt(ph * (1 - ph) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, mid - half), min(1.0, mid + half)


def derive_seed(base: int, *path: int) -> int:
    ss = np.random.SeedSequence([int(base) & (2 ** 64 - 1), *[int(x) for x in path]])
    return int(ss.generate_state(1, np.uint64)[0])


def summary(values) -> dict:
    a = np.asarray(list(values), dtype=np.float64)
    if a.size == 0:
        return {"count": 0}
    mean = float(a.mean())
    se = float(a.std(ddof=1) / math.sqrt(a.size)) if a.size > 1 else 0.0
    return {
        "count": int(a.size),
        "mean": mean,
        "min": float(a.min()),
        "max": float(a.max()),
        "ci_low": mean - Z * se,
        "ci_high": mean + Z * se,
    }
