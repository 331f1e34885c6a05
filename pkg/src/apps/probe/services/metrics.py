"""src/apps/probe/services/metrics.py."""

from typing import Collection, Dict, Iterable, Sequence

import numpy as np
from sklearn.metrics import precision_recall_fscore_support

from src.apps.probe.schemas import PRF
from src.core.exceptions import ValidationFailedError


def evaluate(predictions: Sequence[int], gold: Sequence[int], positive: Collection[int]) -> PRF:
    """
    Token-level P/R/F1 pooled over the positive classes: a hit is a token
    whose prediction equals its positive gold class.
    """
    pred = np.asarray(predictions)
    ref = np.asarray(gold)
    if pred.shape != ref.shape:
        raise ValidationFailedError(f"{pred.size} predictions for {ref.size} gold labels")
    if not ref.size:
        return PRF(precision=0.0, recall=0.0, f1=0.0)
    precision, recall, f1, _ = precision_recall_fscore_support(
        ref, pred, labels=sorted(positive), average="micro", zero_division=0
    )
    return PRF(precision=float(precision), recall=float(recall), f1=float(f1))


def per_class(predictions: Sequence[int], gold: Sequence[int], classes: Iterable[int]) -> Dict[int, PRF]:
    """One PRF per class."""
    return {c: evaluate(predictions, gold, [c]) for c in classes}


def macro(scores: Iterable[PRF]) -> PRF:
    """Arithmetic mean of each metric, used for seed averaging too."""
    scores = list(scores)
    if not scores:
        raise ValidationFailedError("Nothing to average")
    return PRF(
        precision=float(np.mean([s.precision for s in scores])),
        recall=float(np.mean([s.recall for s in scores])),
        f1=float(np.mean([s.f1 for s in scores])),
    )
