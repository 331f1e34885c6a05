"""src/apps/contrastive/services/german.py."""

import logging
import re
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Set

from src.apps.contrastive.schemas import ContrastiveVariant
from src.apps.contrastive.services.edits import delete_token, insert_token, replace_token
from src.core.enum import RuleTag
from src.core.exceptions import ResourceNotFoundError, ValidationFailedError

logger = logging.getLogger(__name__)

NICHT = "nicht"
KEIN_RE = re.compile(r"^([Kk])ein(e|en|em|er|es)?$")
EIN_RE = re.compile(r"^([Ee])in(e|en|em|er|es)?$")
UN_RE = re.compile(r"^([Uu])n(\w{3,})$")
PUNCT_RE = re.compile(r"^\W+$")

FINITE_VERB_TAGS = {"VVFIN", "VAFIN", "VMFIN"}
UN_CANDIDATE_TAGS = {"ADJA", "ADJD", "VVPP"}

# finite auxiliaries and modals: the cheap finite-verb detector
FINITE_VERBS = {
    "bin", "bist", "ist", "sind", "seid", "war", "warst", "waren", "wart", "wäre", "wären",
    "habe", "hast", "hat", "haben", "habt", "hatte", "hatten", "hätte", "hätten",
    "werde", "wirst", "wird", "werden", "werdet", "wurde", "wurden", "würde", "würden",
    "kann", "kannst", "können", "konnte", "konnten", "könnte", "könnten",
    "muss", "musst", "müssen", "musste", "mussten", "müsste",
    "soll", "sollst", "sollen", "sollte", "sollten",
    "will", "willst", "wollen", "wollte", "wollten",
    "darf", "darfst", "dürfen", "durfte", "durften",
    "mag", "möchte", "möchten", "gibt", "gab", "weiß",
}


def load_vocabulary(path: Path) -> Set[str]:
    """Reads a vocabulary file: one entry per line, extra columns ignored."""
    try:
        with open(path, encoding="utf-8") as fh:
            return {line.split()[0] for line in fh if line.strip()}
    except FileNotFoundError as e:
        raise ResourceNotFoundError(f"Vocabulary not found: {path}") from e


class GermanVariantGenerator:
    """
    Applies the six German polarity-reversal rules to a tokenized reference:
    nicht deletion/insertion, kein<->ein swaps and un- deletion/insertion.
    """

    def __init__(self, vocabulary: Iterable[str] = ()):
        self.vocabulary = set(vocabulary)

    def gen_german_variants(
        self, tokens: Sequence[str], pos_tags: Optional[Sequence[str]] = None
    ) -> List[ContrastiveVariant]:
        """One variant per applicable site of every rule."""
        if pos_tags is not None and len(pos_tags) != len(tokens):
            raise ValidationFailedError(
                f"{len(pos_tags)} POS tags for {len(tokens)} tokens"
            )
        variants: List[ContrastiveVariant] = []
        variants += self._nicht_deletions(tokens)
        variants += self._kein_swaps(tokens)
        variants += self._affix_deletions(tokens)
        variants += self._nicht_insertions(tokens, pos_tags)
        variants += self._ein_swaps(tokens)
        variants += self._affix_insertions(tokens, pos_tags)
        return variants

    @staticmethod
    def _nicht_deletions(tokens: Sequence[str]) -> List[ContrastiveVariant]:
        return [
            ContrastiveVariant(
                tokens=delete_token(tokens, i),
                rule_tag=RuleTag.NICHT_DEL,
                direction=RuleTag.NICHT_DEL.direction,
                position=i,
            )
            for i, tok in enumerate(tokens)
            if tok.lower() == NICHT
        ]

    @staticmethod
    def _kein_swaps(tokens: Sequence[str]) -> List[ContrastiveVariant]:
        variants = []
        for i, tok in enumerate(tokens):
            match = KEIN_RE.match(tok)
            if match:
                initial = "E" if match.group(1) == "K" else "e"
                variants.append(
                    ContrastiveVariant(
                        tokens=replace_token(tokens, i, f"{initial}in{match.group(2) or ''}"),
                        rule_tag=RuleTag.KEIN_TO_EIN,
                        direction=RuleTag.KEIN_TO_EIN.direction,
                        position=i,
                    )
                )
        return variants

    @staticmethod
    def _ein_swaps(tokens: Sequence[str]) -> List[ContrastiveVariant]:
        variants = []
        for i, tok in enumerate(tokens):
            match = EIN_RE.match(tok)
            if match:
                initial = "K" if match.group(1) == "E" else "k"
                variants.append(
                    ContrastiveVariant(
                        tokens=replace_token(tokens, i, f"{initial}ein{match.group(2) or ''}"),
                        rule_tag=RuleTag.EIN_TO_KEIN,
                        direction=RuleTag.EIN_TO_KEIN.direction,
                        position=i,
                    )
                )
        return variants

    def _affix_deletions(self, tokens: Sequence[str]) -> List[ContrastiveVariant]:
        variants = []
        for i, tok in enumerate(tokens):
            match = UN_RE.match(tok)
            if not match:
                continue
            rest = match.group(2)
            if match.group(1) == "U":
                rest = rest[0].upper() + rest[1:]
            if rest in self.vocabulary:
                variants.append(
                    ContrastiveVariant(
                        tokens=replace_token(tokens, i, rest),
                        rule_tag=RuleTag.AFFIX_DEL,
                        direction=RuleTag.AFFIX_DEL.direction,
                        position=i,
                    )
                )
        return variants

    def _affix_insertions(
        self, tokens: Sequence[str], pos_tags: Optional[Sequence[str]]
    ) -> List[ContrastiveVariant]:
        variants = []
        for i, tok in enumerate(tokens):
            if UN_RE.match(tok) or not tok.isalpha() or len(tok) < 3:
                continue
            if pos_tags is not None:
                if pos_tags[i] not in UN_CANDIDATE_TAGS:
                    continue
            elif not tok[0].islower():
                continue
            negated = f"un{tok}"
            if negated in self.vocabulary:
                variants.append(
                    ContrastiveVariant(
                        tokens=replace_token(tokens, i, negated),
                        rule_tag=RuleTag.AFFIX_INS,
                        direction=RuleTag.AFFIX_INS.direction,
                        position=i,
                    )
                )
        return variants

    @staticmethod
    def _finite_verb(tokens: Sequence[str], pos_tags: Optional[Sequence[str]]) -> Optional[int]:
        for i, tok in enumerate(tokens):
            if pos_tags is not None:
                if pos_tags[i] in FINITE_VERB_TAGS:
                    return i
            elif tok.lower() in FINITE_VERBS:
                return i
        return None

    def _nicht_insertions(
        self, tokens: Sequence[str], pos_tags: Optional[Sequence[str]]
    ) -> List[ContrastiveVariant]:
        if any(tok.lower() == NICHT for tok in tokens) or not tokens:
            return []
        verb = self._finite_verb(tokens, pos_tags)
        if verb is not None:
            positions, review = [verb + 1], False
        else:
            positions = [p for p in range(1, len(tokens) + 1) if not PUNCT_RE.match(tokens[p - 1])]
            review = True
        return [
            ContrastiveVariant(
                tokens=insert_token(tokens, p, NICHT),
                rule_tag=RuleTag.NICHT_INS,
                direction=RuleTag.NICHT_INS.direction,
                position=p,
                needs_review=review,
            )
            for p in positions
        ]
