"""src/apps/attnflow/services/stats.py."""

from typing import Sequence

import numpy as np

from src.core.exceptions import ValidationFailedError


def rank_average_ties(values: Sequence[float]) -> np.ndarray:
    """1-based ranks; tied values share the mean of their positions."""
    a = np.asarray(values, dtype=np.float64).reshape(-1)
    order = np.argsort(a, kind="mergesort")
    ranks = np.empty(a.size, dtype=np.float64)
    i = 0
    while i < a.size:
        j = i
        while j + 1 < a.size and a[order[j + 1]] == a[order[i]]:
            j += 1
        ranks[order[i: j + 1]] = 0.5 * (i + j) + 1.0
        i = j + 1
    return ranks


def spearman(x: Sequence[float], y: Sequence[float]) -> float:
    """Pearson correlation of average ranks."""
    if len(x) != len(y):
        raise ValidationFailedError(f"Length mismatch: {len(x)} vs {len(y)}")
    if len(x) < 2:
        raise ValidationFailedError("Spearman needs at least two observations")
    a = rank_average_ties(x)
    b = rank_average_ties(y)
    a -= a.mean()
    b -= b.mean()
    denom = float(np.sqrt(np.sum(a * a) * np.sum(b * b)))
    if denom == 0:
        raise ValidationFailedError("Spearman is undefined for a constant vector")
    return float(np.clip(np.sum(a * b) / denom, -1.0, 1.0))
