"""src/apps/negdata/services/manual.py."""

import csv
import logging
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Set, Tuple

from src.apps.negdata.schemas import ManualEvalLabel, ManualReport
from src.core.enum import TranslationCategory
from src.core.exceptions import ResourceNotFoundError, ValidationFailedError

logger = logging.getLogger(__name__)

ACCURATE = (TranslationCategory.CORRECT, TranslationCategory.REPHRASED)


def _hamilton_tenths(counts: Mapping[TranslationCategory, int], total: int) -> Dict[TranslationCategory, float]:
    """
    Percentages with one decimal that sum to exactly 100.0
    (largest remainder, ties broken by category order).
    """
    units = {c: counts[c] * 1000 // total for c in TranslationCategory}
    remainders = {c: counts[c] * 1000 % total for c in TranslationCategory}
    missing = 1000 - sum(units.values())
    order = sorted(TranslationCategory, key=lambda c: -remainders[c])
    for c in order[:missing]:
        units[c] += 1
    return {c: units[c] / 10 for c in TranslationCategory}


class ManualEvalService:
    """
    Bookkeeping for the five human translation categories.
    Labels are produced by annotators; this service only stores and aggregates them.
    """

    @staticmethod
    def read_manual_labels(path: Path) -> List[ManualEvalLabel]:
        """Reads a `pair_id,category[,instance_id]` CSV."""
        try:
            with open(path, encoding="utf-8", newline="") as fh:
                reader = csv.DictReader(fh)
                missing = {"pair_id", "category"} - set(reader.fieldnames or [])
                if missing:
                    raise ValidationFailedError(f"{path}: missing columns {sorted(missing)}")
                labels = []
                seen: Set[Tuple[str, Optional[int]]] = set()
                for line_no, row in enumerate(reader, start=2):
                    if row["pair_id"] is None or row["category"] is None:
                        raise ValidationFailedError(f"{path}:{line_no}: expected pair_id and category")
                    try:
                        category = TranslationCategory(row["category"].strip())
                    except ValueError as e:
                        raise ValidationFailedError(
                            f"{path}:{line_no}: unknown category {row['category']!r}"
                        ) from e
                    instance = (row.get("instance_id") or "").strip()
                    try:
                        instance_id = int(instance) if instance else None
                    except ValueError as e:
                        raise ValidationFailedError(f"{path}:{line_no}: invalid instance_id {instance!r}") from e
                    key = (row["pair_id"].strip(), instance_id)
                    if key in seen:
                        raise ValidationFailedError(f"{path}:{line_no}: duplicate label for {key[0]}")
                    seen.add(key)
                    labels.append(ManualEvalLabel(pair_id=key[0], category=category, instance_id=instance_id))
        except FileNotFoundError as e:
            raise ResourceNotFoundError(f"Label file not found: {path}") from e
        logger.info("Read %d manual labels from %s", len(labels), path)
        return labels

    def aggregate_manual(self, labels: Iterable[ManualEvalLabel]) -> ManualReport:
        """Counts, percentages and accuracy (Correct + Rephrased over total)."""
        counts = {c: 0 for c in TranslationCategory}
        for label in labels:
            counts[label.category] += 1
        return self.manual_from_counts(counts)

    @staticmethod
    def manual_from_counts(counts: Mapping[TranslationCategory, int]) -> ManualReport:
        """Aggregates an already counted category row."""
        full = {c: int(counts.get(c, 0)) for c in TranslationCategory}
        total = sum(full.values())
        if total == 0:
            raise ValidationFailedError("Accuracy is undefined for an empty label list")
        accuracy = sum(full[c] for c in ACCURATE) / total
        return ManualReport(
            total=total,
            counts=full,
            percentages=_hamilton_tenths(full, total),
            accuracy=accuracy,
            accuracy_pct=round(accuracy * 100, 1),
            dropped_pct=round(full[TranslationCategory.DROPPED] * 100 / total, 1),
        )
