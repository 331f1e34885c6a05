"""src/apps/attnflow/tests/test_stats.py."""

import random

import numpy as np
import pytest
from src.apps.attnflow.services.stats import rank_average_ties, spearman
from src.core.exceptions import ValidationFailedError
from tests.utils import average_ranks, spearman_oracle


def test_monotone():
    """Increasing pairs give exactly 1."""
    assert spearman([1, 2, 3], [10, 20, 30]) == 1.0


def test_antitone():
    """Decreasing pairs give exactly -1."""
    assert spearman([1, 2, 3], [30, 20, 10]) == -1.0


def test_ties_example():
    """[1,2,2,4] against [1,3,2,4]."""
    assert rank_average_ties([1, 2, 2, 4]).tolist() == [1.0, 2.5, 2.5, 4.0]
    assert spearman([1, 2, 2, 4], [1, 3, 2, 4]) == pytest.approx(spearman_oracle([1, 2, 2, 4], [1, 3, 2, 4]), abs=1e-12)


def test_random_tied_vectors():
    """500 tied vectors match the plain-Python oracle."""
    rng = random.Random(5)
    for _ in range(500):
        n = rng.randint(3, 30)
        x = [rng.randint(0, 5) for _ in range(n)]
        y = [rng.randint(0, 5) for _ in range(n)]
        if len(set(x)) < 2 or len(set(y)) < 2:
            continue
        assert rank_average_ties(x).tolist() == average_ranks(x)
        assert spearman(x, y) == pytest.approx(spearman_oracle(x, y), abs=1e-12)


def test_invariant_under_increasing_transform():
    """exp and affine maps keep the value."""
    rng = np.random.default_rng(1)
    x, y = rng.random(20), rng.random(20)
    assert spearman(np.exp(x), 3 * y + 1) == pytest.approx(spearman(x, y), abs=1e-12)


@pytest.mark.parametrize("x, y", [([1, 2], [1, 2, 3]), ([1], [1]), ([2, 2, 2], [1, 2, 3])])
def test_invalid_inputs(x, y):
    """Mismatched, too short or constant inputs are rejected."""
    with pytest.raises(ValidationFailedError):
        spearman(x, y)
