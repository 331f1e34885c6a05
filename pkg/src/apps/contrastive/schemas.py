"""src/apps/contrastive/schemas.py."""

from typing import List, Optional, Tuple
from pydantic import BaseModel, ConfigDict, Field, model_validator
from src.core.enum import EditDirection, RuleTag

GroupKey = Tuple[RuleTag, EditDirection]

LogProb = float


class ContrastiveVariant(BaseModel):
    """A polarity-flipped copy of the reference."""

    model_config = ConfigDict(frozen=True)

    tokens: List[str]
    rule_tag: RuleTag
    direction: EditDirection
    position: int = Field(ge=0)
    needs_review: bool = False

    @model_validator(mode="after")
    def validate_direction(self) -> "ContrastiveVariant":
        """The direction follows from the rule."""
        if self.direction != self.rule_tag.direction:
            raise ValueError(f"{self.rule_tag.value} is a {self.rule_tag.direction.value} rule")
        return self


class ReferenceInput(BaseModel):
    """One line of the generator input."""

    instance_id: str
    source_tokens: List[str] = []
    reference_tokens: List[str]
    pos_tags: Optional[List[str]] = None

    @model_validator(mode="after")
    def validate_pos_tags(self) -> "ReferenceInput":
        """One tag per reference token."""
        if self.pos_tags is not None and len(self.pos_tags) != len(self.reference_tokens):
            raise ValueError(
                f"{self.instance_id}: {len(self.pos_tags)} POS tags for "
                f"{len(self.reference_tokens)} tokens"
            )
        return self



class ContrastiveInstance(BaseModel):
    """Reference translation with its contrastive variants."""

    model_config = ConfigDict(frozen=True)

    instance_id: str
    source_tokens: List[str] = []
    reference_tokens: List[str]
    variants: List[ContrastiveVariant] = []

    @model_validator(mode="after")
    def validate_variants(self) -> "ContrastiveInstance":
        """Every variant differs from the reference."""
        for v in self.variants:
            if v.tokens == self.reference_tokens:
                raise ValueError(f"{self.instance_id}: variant {v.rule_tag.value} equals the reference")
        return self


class ScoreLine(BaseModel):
    """One line of the score file: token log-probabilities (natural log)."""

    instance_id: str
    reference: List[float]
    variants: List[List[float]]


class ScoreRecord(BaseModel):
    """Sentence log-probabilities of a reference and its variants."""

    model_config = ConfigDict(frozen=True)

    instance_id: str
    reference_logprob: float = Field(le=0)
    variant_logprobs: List[float]

    @model_validator(mode="after")
    def validate_logprobs(self) -> "ScoreRecord":
        """Log-probabilities never exceed zero."""
        if any(lp > 0 for lp in self.variant_logprobs):
            raise ValueError(f"{self.instance_id}: positive variant log-probability")
        return self


class GroupAccuracy(BaseModel):
    """One row of the accuracy report."""

    group: str
    direction: str
    n: int
    correct: int
    accuracy: float


class AccuracyReport(BaseModel):
    """Per-group accuracies plus pooled rows."""

    rows: List[GroupAccuracy]
    warnings: List[str] = []
