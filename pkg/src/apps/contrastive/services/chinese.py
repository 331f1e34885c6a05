"""src/apps/contrastive/services/chinese.py."""

from typing import Iterable, List, Optional, Sequence

from src.apps.contrastive.schemas import ContrastiveVariant
from src.apps.contrastive.services.edits import delete_token, insert_token, replace_token
from src.core.enum import RuleTag
from src.core.exceptions import ValidationFailedError

# bu, mei, wu, fei, bie
DEFAULT_CUES = ("不", "没", "无", "非", "别")


class ChineseVariantGenerator:
    """
    Deletes Chinese negation cues and proposes insertion candidates.
    Insertions are over-generated and flagged for a grammaticality review.
    """

    def __init__(self, cues: Iterable[str] = DEFAULT_CUES):
        self.cues = tuple(cues)

    def _deletions(self, tokens: Sequence[str]) -> List[ContrastiveVariant]:
        """
        One variant per cue occurrence. A cue token is dropped; a cue inside a
        segmented word (没有, 不是) is cut out of it and the variant is flagged
        for review, since words like 非常 carry the character without negating.
        """
        variants = []
        for i, tok in enumerate(tokens):
            if tok in self.cues:
                variants.append(
                    ContrastiveVariant(
                        tokens=delete_token(tokens, i),
                        rule_tag=RuleTag.ZH_DEL,
                        direction=RuleTag.ZH_DEL.direction,
                        position=i,
                    )
                )
                continue
            seen = set()
            for cue in self.cues:
                start = tok.find(cue)
                while start != -1:
                    rest = tok[:start] + tok[start + len(cue):]
                    if rest not in seen:
                        seen.add(rest)
                        variants.append(
                            ContrastiveVariant(
                                tokens=replace_token(tokens, i, rest),
                                rule_tag=RuleTag.ZH_DEL,
                                direction=RuleTag.ZH_DEL.direction,
                                position=i,
                                needs_review=True,
                            )
                        )
                    start = tok.find(cue, start + 1)
        return variants

    def gen_chinese_variants(
        self,
        tokens: Sequence[str],
        pos_tags: Optional[Sequence[str]] = None,
        insert_cues: Optional[Iterable[str]] = None,
    ) -> List[ContrastiveVariant]:
        """Deletion variants first, then insertion candidates per cue and position."""
        if pos_tags is not None and len(pos_tags) != len(tokens):
            raise ValidationFailedError(f"{len(pos_tags)} POS tags for {len(tokens)} tokens")
        variants = self._deletions(tokens)
        if pos_tags is not None:
            positions = [i for i, tag in enumerate(pos_tags) if tag.upper().startswith("V")]
        else:
            positions = list(range(len(tokens)))
        for cue in self.cues if insert_cues is None else tuple(insert_cues):
            variants.extend(
                ContrastiveVariant(
                    tokens=insert_token(tokens, p, cue),
                    rule_tag=RuleTag.ZH_INS,
                    direction=RuleTag.ZH_INS.direction,
                    position=p,
                    needs_review=True,
                )
                for p in positions
            )
        return variants
