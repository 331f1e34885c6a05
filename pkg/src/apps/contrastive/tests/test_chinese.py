"""src/apps/contrastive/tests/test_chinese.py."""

import pytest
from src.apps.contrastive.services.chinese import DEFAULT_CUES, ChineseVariantGenerator
from src.core.enum import RuleTag
from src.core.exceptions import ValidationFailedError


def test_cue_deletion():
    """Each cue token yields one deletion variant."""
    variants = ChineseVariantGenerator().gen_chinese_variants(["我", "不", "喜欢", "它"])
    deleted = [v for v in variants if v.rule_tag == RuleTag.ZH_DEL]
    assert [v.tokens for v in deleted] == [["我", "喜欢", "它"]]
    assert not deleted[0].needs_review


def test_insertion_every_position():
    """Without tags every cue goes before every token, flagged for review."""
    variants = ChineseVariantGenerator().gen_chinese_variants(["我", "喜欢", "它"])
    inserted = [v for v in variants if v.rule_tag == RuleTag.ZH_INS]
    assert len(inserted) == len(DEFAULT_CUES) * 3
    assert all(v.needs_review for v in inserted)
    assert ["我", "不", "喜欢", "它"] in [v.tokens for v in inserted]


def test_insertion_before_verbs():
    """With tags only verbs receive a cue."""
    variants = ChineseVariantGenerator(cues=["不"]).gen_chinese_variants(
        ["我", "喜欢", "它"], pos_tags=["PN", "VV", "PN"]
    )
    assert [v.tokens for v in variants] == [["我", "不", "喜欢", "它"]]


def test_no_cue_no_deletion():
    """A sentence without cues has no deletion variant."""
    variants = ChineseVariantGenerator().gen_chinese_variants(["好"])
    assert all(v.rule_tag == RuleTag.ZH_INS for v in variants)


def test_cue_inside_segmented_word():
    """A cue character inside a word is cut out and the word is kept."""
    variants = ChineseVariantGenerator().gen_chinese_variants(["我", "没有", "钱"], insert_cues=[])
    assert [v.tokens for v in variants] == [["我", "有", "钱"]]
    assert variants[0].rule_tag == RuleTag.ZH_DEL
    assert variants[0].position == 1
    assert variants[0].needs_review


def test_whole_and_in_word_cues():
    """Whole cue tokens are dropped, in-word cues shorten their token."""
    variants = ChineseVariantGenerator().gen_chinese_variants(
        ["他", "不", "是", "无法", "来"], insert_cues=[]
    )
    assert [v.tokens for v in variants] == [
        ["他", "是", "无法", "来"],
        ["他", "不", "是", "法", "来"],
    ]
    assert [v.needs_review for v in variants] == [False, True]


def test_mismatched_pos_tags():
    """Tags must cover every token."""
    with pytest.raises(ValidationFailedError):
        ChineseVariantGenerator().gen_chinese_variants(["我", "喜欢"], pos_tags=["PN"])
