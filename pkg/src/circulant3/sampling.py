"""Seeded rejection sampling of admissible points from a box."""

from __future__ import annotations

import numpy as np

from .errors import CirculantError, SamplingExhausted
from .metric import MetricFunctions, metric_at
from .specfile import Box

MAX_DRAW_FACTOR = 100


def is_admissible(m: MetricFunctions, p) -> bool:
    """True when the metric evaluates cleanly at p (A > B > 0, constraints hold)."""
    try:
        metric_at(m, p)
    except CirculantError:
        return False
    return True


def sample_admissible_points(m: MetricFunctions, box: Box, n: int, seed: int) -> np.ndarray:
    """Draw n admissible points uniformly from box, rejecting bad ones.

    Deterministic for a given seed: points are generated serially from one
    PRNG stream. Raises SamplingExhausted when fewer than n points are
    accepted within 100*n draws (acceptance rate below 1 percent).
    """
    if n < 1:
        raise ValueError("need n >= 1 sample points")
    rng = np.random.default_rng(seed)
    lows = np.array([lo for lo, _ in box])
    highs = np.array([hi for _, hi in box])
    accepted = []
    for _ in range(MAX_DRAW_FACTOR * n):
        p = rng.uniform(lows, highs)
        if is_admissible(m, p):
            accepted.append(p)
            if len(accepted) == n:
                return np.array(accepted)
    raise SamplingExhausted(
        f"accepted only {len(accepted)} of {n} requested points after "
        f"{MAX_DRAW_FACTOR * n} draws from box {box}"
    )
