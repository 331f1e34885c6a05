"""src/apps/contrastive/tests/test_scoring.py."""

import random

import pytest
from src.apps.contrastive.schemas import ContrastiveInstance, ContrastiveVariant, ScoreLine, ScoreRecord
from src.apps.contrastive.services.io import dump_instances, read_instances, read_score_lines
from src.apps.contrastive.services.scoring import ContrastiveScorer
from src.core.enum import EditDirection, RuleTag
from src.core.exceptions import ValidationFailedError
from tests.factories.scores import ScoreRecordFactory


def _variant(tokens, rule, position=0):
    return ContrastiveVariant(tokens=tokens, rule_tag=rule, direction=rule.direction, position=position)


def test_sentence_logprob():
    """Sentence score is the sum of token scores."""
    assert ContrastiveScorer.sentence_logprob([-0.5, -1.25, 0.0]) == -1.75


@pytest.mark.parametrize("scores", [[], [-0.1, 0.2]])
def test_sentence_logprob_invalid(scores):
    """Empty sequences and positive values are rejected."""
    with pytest.raises(ValidationFailedError):
        ContrastiveScorer.sentence_logprob(scores)


def test_reference_wins():
    """-10.2 against -11.5 is correct."""
    record = ScoreRecord(instance_id="a", reference_logprob=-10.2, variant_logprobs=[-11.5])
    assert ContrastiveScorer.score_instance(record)


def test_tie_is_incorrect():
    """Equal scores do not count."""
    record = ScoreRecord(instance_id="a", reference_logprob=-3.0, variant_logprobs=[-4.0, -3.0])
    assert not ContrastiveScorer.score_instance(record)


def test_score_instance_matches_oracle():
    """Strict comparison agrees with brute force on random records."""
    ScoreRecordFactory.seed_random(7)
    for record in ScoreRecordFactory.batch(1000):
        expected = True
        for lp in record.variant_logprobs:
            if not record.reference_logprob > lp:
                expected = False
        assert ContrastiveScorer.score_instance(record) is expected


def test_shift_and_permutation_invariance():
    """Shifting all scores or reordering variants keeps the outcome."""
    ScoreRecordFactory.seed_random(3)
    rng = random.Random(3)
    for record in ScoreRecordFactory.batch(200):
        outcome = ContrastiveScorer.score_instance(record)
        shifted = ScoreRecord(
            instance_id=record.instance_id,
            reference_logprob=record.reference_logprob - 2.5,
            variant_logprobs=[lp - 2.5 for lp in record.variant_logprobs],
        )
        shuffled = list(record.variant_logprobs)
        rng.shuffle(shuffled)
        permuted = record.model_copy(update={"variant_logprobs": shuffled})
        assert ContrastiveScorer.score_instance(shifted) is outcome
        assert ContrastiveScorer.score_instance(permuted) is outcome


def test_group_scores_and_accuracy():
    """Groups split by rule; pooled and overall rows follow."""
    inst_a = ContrastiveInstance(
        instance_id="a",
        reference_tokens=["Das", "ist", "nicht", "gut"],
        variants=[
            _variant(["Das", "ist", "gut"], RuleTag.NICHT_DEL, 2),
            _variant(["Das", "ist", "nicht", "nicht", "gut"], RuleTag.NICHT_INS, 2),
        ],
    )
    inst_b = ContrastiveInstance(
        instance_id="b",
        reference_tokens=["kein", "Problem"],
        variants=[_variant(["ein", "Problem"], RuleTag.KEIN_TO_EIN)],
    )
    lines = [
        ScoreLine(instance_id="a", reference=[-1.0, -1.0], variants=[[-3.0], [-1.0, -0.5]]),
        ScoreLine(instance_id="b", reference=[-2.0], variants=[[-5.0]]),
    ]
    scorer = ContrastiveScorer()
    groups = scorer.group_scores([inst_a, inst_b], lines)
    assert set(groups) == {
        (RuleTag.NICHT_DEL, EditDirection.DELETION),
        (RuleTag.NICHT_INS, EditDirection.INSERTION),
        (RuleTag.KEIN_TO_EIN, EditDirection.DELETION),
    }
    report = scorer.contrastive_accuracy(groups)
    rows = {(r.group, r.direction): r for r in report.rows}
    assert rows[("nicht_del", "deletion")].accuracy == 1.0
    assert rows[("nicht_ins", "insertion")].accuracy == 0.0
    assert rows[("all", "deletion")].n == 2
    assert rows[("overall", "all")].correct == 2
    assert rows[("overall", "all")].n == 3
    assert report.rows[-1].group == "overall"


def test_empty_group_omitted():
    """An empty group is left out with a warning."""
    report = ContrastiveScorer().contrastive_accuracy({(RuleTag.ZH_INS, EditDirection.INSERTION): []})
    assert report.rows == []
    assert report.warnings


def test_variant_count_mismatch():
    """Score lines must hold one entry per variant."""
    inst = ContrastiveInstance(
        instance_id="a", reference_tokens=["不", "好"], variants=[_variant(["好"], RuleTag.ZH_DEL)]
    )
    line = ScoreLine(instance_id="a", reference=[-1.0], variants=[[-2.0], [-3.0]])
    with pytest.raises(ValidationFailedError):
        ContrastiveScorer().group_scores([inst], [line])


def test_variant_equal_to_reference_rejected():
    """A variant identical to the reference is invalid."""
    with pytest.raises(ValueError):
        ContrastiveInstance(
            instance_id="a", reference_tokens=["gut"], variants=[_variant(["gut"], RuleTag.AFFIX_INS)]
        )


def test_jsonl_files(tmp_path):
    """Instances survive a JSONL file; score lines are read back."""
    inst = ContrastiveInstance(
        instance_id="a", reference_tokens=["不", "好"], variants=[_variant(["好"], RuleTag.ZH_DEL)]
    )
    path = tmp_path / "set.jsonl"
    path.write_text(dump_instances([inst]), encoding="utf-8")
    assert list(read_instances(path)) == [inst]

    scores = tmp_path / "scores.jsonl"
    scores.write_text('{"instance_id": "a", "reference": [-1.0], "variants": [[-2.0]]}\n', encoding="utf-8")
    assert list(read_score_lines(scores))[0].variants == [[-2.0]]

    scores.write_text('{"instance_id": "a"}\n', encoding="utf-8")
    with pytest.raises(ValidationFailedError):
        list(read_score_lines(scores))
