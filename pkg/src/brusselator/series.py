"""Tail estimates for slowly convergent mode sums."""

from __future__ import annotations

import math

import numpy as np


def power_law_tail(k: np.ndarray, terms: np.ndarray, safety: float = 2.0) -> tuple[float, float]:
    """Estimate ``sum_{j > k[-1]} |t_j|`` from the decay of the last terms.

    Fits ``|t| ~ c k^-p`` through the last 25% of the nonzero terms (rough but
    robust) and integrates past ``k[-1]``, assuming the stride between
    contributing indices stays as in the data. Returns ``(bound, p)``; the
    bound is scaled by ``safety``.
    """
    k = np.asarray(k, dtype=float)
    t = np.abs(np.asarray(terms, dtype=float))
    keep = t > 0
    k, t = k[keep], t[keep]
    if k.size < 8:
        return (float(t[-1]) * safety if t.size else 0.0), float("nan")
    tail = slice(int(0.75 * k.size), None)
    kk, tt = np.log(k[tail]), np.log(t[tail])
    slope = float(np.polyfit(kk, tt, 1)[0])
    p = -slope
    stride = float(np.median(np.diff(k[tail])))
    if p <= 1.0:
        return math.inf, p
    k_last, t_last = k[-1], t[-1]
    bound = t_last * k_last / ((p - 1.0) * stride)
    return safety * float(bound), p
