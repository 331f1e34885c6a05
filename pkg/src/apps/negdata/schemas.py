"""src/apps/negdata/schemas.py."""

from typing import Dict, List, Optional, Set, Tuple
from pydantic import (
    BaseModel,
    ConfigDict,
    Field,
    ValidationInfo,
    field_validator,
    model_validator,
)
from src.core.enum import Split, TranslationCategory

Span = Tuple[int, int]


def span_tokens(spans: List[Span]) -> Set[int]:
    """Expands inclusive ranges into a token index set."""
    return {i for start, end in spans for i in range(start, end + 1)}


def _check_spans(spans: List[Span], name: str) -> List[Span]:
    ordered = sorted(spans)
    for start, end in ordered:
        if start < 0 or end < start:
            raise ValueError(f"{name}: invalid range [{start},{end}]")
    for (_, prev_end), (start, _) in zip(ordered, ordered[1:]):
        if start <= prev_end:
            raise ValueError(f"{name}: overlapping ranges")
    return ordered


class NegInstance(BaseModel):
    """
    One negation instance: its cue, event and scope token ranges (inclusive).
    """

    model_config = ConfigDict(frozen=True)

    instance_id: int
    cue_spans: List[Span]
    event_spans: List[Span] = []
    scope_spans: List[Span] = []

    @field_validator("cue_spans", "event_spans", "scope_spans")
    @classmethod
    def validate_ranges(cls, v: List[Span], info: ValidationInfo) -> List[Span]:
        """Ranges are well-formed and non-overlapping within one list."""
        return _check_spans(v, info.field_name)

    @model_validator(mode="after")
    def validate_components(self) -> "NegInstance":
        """A cue is mandatory and events sit inside the scope."""
        if not self.cue_spans:
            raise ValueError(f"instance {self.instance_id} has no cue")
        outside = self.event_tokens - self.scope_tokens
        if outside:
            raise ValueError(
                f"instance {self.instance_id}: event tokens {sorted(outside)} "
                "are not part of the scope"
            )
        return self

    @property
    def cue_tokens(self) -> Set[int]:
        """Cue token indices."""
        return span_tokens(self.cue_spans)

    @property
    def event_tokens(self) -> Set[int]:
        """Event token indices."""
        return span_tokens(self.event_spans)

    @property
    def scope_tokens(self) -> Set[int]:
        """Scope token indices."""
        return span_tokens(self.scope_spans)

    @property
    def max_index(self) -> int:
        """Largest token index referenced by any span."""
        ends = [end for spans in (self.cue_spans, self.event_spans, self.scope_spans) for _, end in spans]
        return max(ends, default=-1)


class AnnotatedSentence(BaseModel):
    """Tokens plus their negation instances."""

    model_config = ConfigDict(frozen=True)

    sentence_id: str
    tokens: List[str]
    instances: List[NegInstance] = []
    split: Optional[Split] = None

    @model_validator(mode="after")
    def validate_extent(self) -> "AnnotatedSentence":
        """Every span stays inside the sentence."""
        if self.instances and not self.tokens:
            raise ValueError(f"sentence {self.sentence_id}: instances without tokens")
        for inst in self.instances:
            if inst.max_index >= len(self.tokens):
                raise ValueError(
                    f"sentence {self.sentence_id}: instance {inst.instance_id} "
                    f"references token {inst.max_index} of {len(self.tokens)}"
                )
        return self


class ParallelPair(BaseModel):
    """Source and target sentences of one parallel pair."""

    model_config = ConfigDict(frozen=True)

    pair_id: str
    source: AnnotatedSentence
    target: AnnotatedSentence
    split: Split


class SubwordAlignment(BaseModel):
    """Maps each word index to its inclusive subword range."""

    model_config = ConfigDict(frozen=True)

    word_to_subwords: Dict[int, Span]

    def subwords_of(self, word_index: int) -> List[int]:
        """Subword positions of one word."""
        start, end = self.word_to_subwords[word_index]
        return list(range(start, end + 1))


class CorpusStats(BaseModel):
    """Number of instances having each negation component."""

    sentences: int = 0
    instances: int = 0
    cue: int = 0
    event: int = 0
    scope: int = 0


class ManualEvalLabel(BaseModel):
    """Human judgement of one translated negation."""

    model_config = ConfigDict(frozen=True)

    pair_id: str
    category: TranslationCategory
    instance_id: Optional[int] = None


class ManualReport(BaseModel):
    """Category counts, percentages and accuracy of a manual evaluation."""

    total: int
    counts: Dict[TranslationCategory, int]
    percentages: Dict[TranslationCategory, float]
    accuracy: float = Field(ge=0, le=1)
    accuracy_pct: float
    dropped_pct: float
