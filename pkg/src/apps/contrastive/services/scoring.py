"""src/apps/contrastive/services/scoring.py."""

import logging
import math
from collections import defaultdict
from typing import Dict, Iterable, List, Mapping, Sequence

from src.apps.contrastive.schemas import (
    AccuracyReport,
    ContrastiveInstance,
    GroupAccuracy,
    GroupKey,
    ScoreLine,
    ScoreRecord,
)
from src.core.enum import EditDirection, RuleTag
from src.core.exceptions import ValidationFailedError

logger = logging.getLogger(__name__)

RULE_ORDER = {tag: i for i, tag in enumerate(RuleTag)}


class ContrastiveScorer:
    """
    Scores contrastive sets from exported token log-probabilities.
    A reference is correct only if it beats every variant strictly.
    """

    @staticmethod
    def sentence_logprob(token_logprobs: Sequence[float]) -> float:
        """Sum of token log-probabilities (natural log)."""
        if not token_logprobs:
            raise ValidationFailedError("Cannot score an empty token sequence")
        if any(lp > 0 for lp in token_logprobs):
            raise ValidationFailedError("Token log-probabilities must be <= 0")
        return math.fsum(token_logprobs)

    @staticmethod
    def score_instance(record: ScoreRecord) -> bool:
        """True iff the reference scores strictly higher than all variants."""
        if not record.variant_logprobs:
            raise ValidationFailedError(f"{record.instance_id}: no variant scores")
        return all(record.reference_logprob > lp for lp in record.variant_logprobs)

    def group_scores(
        self, instances: Iterable[ContrastiveInstance], lines: Iterable[ScoreLine]
    ) -> Dict[GroupKey, List[ScoreRecord]]:
        """
        Joins score lines onto instances and splits every instance by rule:
        one ScoreRecord per (instance, rule) holding that rule's variants.
        """
        by_id = {line.instance_id: line for line in lines}
        groups: Dict[GroupKey, List[ScoreRecord]] = defaultdict(list)
        for inst in instances:
            line = by_id.get(inst.instance_id)
            if line is None:
                logger.warning("No scores for instance %s, skipped", inst.instance_id)
                continue
            if len(line.variants) != len(inst.variants):
                raise ValidationFailedError(
                    f"{inst.instance_id}: {len(line.variants)} variant scores "
                    f"for {len(inst.variants)} variants"
                )
            ref = self.sentence_logprob(line.reference)
            per_rule: Dict[GroupKey, List[float]] = defaultdict(list)
            for variant, scores in zip(inst.variants, line.variants):
                per_rule[(variant.rule_tag, variant.direction)].append(
                    self.sentence_logprob(scores)
                )
            for key, lps in per_rule.items():
                groups[key].append(
                    ScoreRecord(instance_id=inst.instance_id, reference_logprob=ref, variant_logprobs=lps)
                )
        return dict(groups)

    def contrastive_accuracy(self, groups: Mapping[GroupKey, Sequence[ScoreRecord]]) -> AccuracyReport:
        """Accuracy per (rule, direction), per direction, and overall."""
        rows: List[GroupAccuracy] = []
        warnings: List[str] = []
        pooled: Dict[EditDirection, List[int]] = {d: [0, 0] for d in EditDirection}

        for rule, direction in sorted(groups, key=lambda k: (RULE_ORDER[k[0]], k[1].value)):
            records = groups[(rule, direction)]
            if not records:
                msg = f"group {rule.value}/{direction.value} is empty, omitted"
                logger.warning(msg)
                warnings.append(msg)
                continue
            correct = sum(self.score_instance(r) for r in records)
            rows.append(
                GroupAccuracy(
                    group=rule.value,
                    direction=direction.value,
                    n=len(records),
                    correct=correct,
                    accuracy=correct / len(records),
                )
            )
            pooled[direction][0] += len(records)
            pooled[direction][1] += correct

        for direction, (n, correct) in pooled.items():
            if n:
                rows.append(
                    GroupAccuracy(group="all", direction=direction.value, n=n, correct=correct, accuracy=correct / n)
                )
        total = sum(n for n, _ in pooled.values())
        if total:
            correct = sum(c for _, c in pooled.values())
            rows.append(
                GroupAccuracy(group="overall", direction="all", n=total, correct=correct, accuracy=correct / total)
            )
        return AccuracyReport(rows=rows, warnings=warnings)
