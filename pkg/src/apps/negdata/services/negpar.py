"""src/apps/negdata/services/negpar.py."""

import logging
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple

from pydantic import ValidationError

from src.apps.negdata.schemas import (
    AnnotatedSentence,
    CorpusStats,
    NegInstance,
    ParallelPair,
    Span,
)
from src.core.enum import Split
from src.core.exceptions import (
    NegParFormatError,
    ResourceNotFoundError,
    ValidationFailedError,
)

logger = logging.getLogger(__name__)

FIXED_COLUMNS = 3
GROUP_WIDTH = 3
EMPTY_MARK = "_"
NO_NEGATION = "***"

Row = Tuple[int, List[str]]


def _runs(flags: Sequence[bool]) -> List[Span]:
    """Turns per-token flags into inclusive ranges of consecutive marks."""
    spans: List[Span] = []
    start: Optional[int] = None
    for i, flag in enumerate(flags):
        if flag and start is None:
            start = i
        elif not flag and start is not None:
            spans.append((start, i - 1))
            start = None
    if start is not None:
        spans.append((start, len(flags) - 1))
    return spans


class NegParService:
    """
    Reads and writes negation annotations in the token-per-row layout:
    sentence-id, token-id, surface, then (cue, event, scope) per instance.
    """

    def parse_negpar(self, path: Path, split: Optional[Split] = None) -> List[AnnotatedSentence]:
        """Parses an annotation file (UTF-8)."""
        try:
            text = Path(path).read_text(encoding="utf-8")
        except FileNotFoundError as e:
            raise ResourceNotFoundError(f"Annotation file not found: {path}") from e
        sentences = self.parse_text(text, split)
        logger.info("Parsed %d sentences from %s", len(sentences), path)
        return sentences

    def parse_text(self, text: str, split: Optional[Split] = None) -> List[AnnotatedSentence]:
        """Parses annotation text already in memory."""
        sentences: List[AnnotatedSentence] = []
        block: List[Row] = []

        for line_no, raw in enumerate(text.splitlines(), start=1):
            line = raw.rstrip("\r\n")
            if line.startswith("#"):
                continue
            if not line.strip():
                if block:
                    sentences.append(self._build_sentence(block, split))
                    block = []
                continue
            columns = line.split("\t")
            if len(columns) < FIXED_COLUMNS:
                raise NegParFormatError(
                    f"expected at least {FIXED_COLUMNS} columns, got {len(columns)}", line_no
                )
            if block and columns[0] != block[0][1][0]:
                sentences.append(self._build_sentence(block, split))
                block = []
            block.append((line_no, columns))

        if block:
            sentences.append(self._build_sentence(block, split))
        return sentences

    def _build_sentence(self, block: List[Row], split: Optional[Split]) -> AnnotatedSentence:
        first_line, first = block[0]
        sentence_id = first[0]
        extra = first[FIXED_COLUMNS:]
        no_negation = extra == [NO_NEGATION]
        width = FIXED_COLUMNS if no_negation else len(first)

        if not no_negation and len(extra) % GROUP_WIDTH:
            raise NegParFormatError(
                f"expected {FIXED_COLUMNS} + {GROUP_WIDTH}k columns, got {len(first)}",
                first_line,
            )

        tokens: List[str] = []
        marks: List[List[str]] = []
        for expected_id, (line_no, columns) in enumerate(block):
            row_extra = columns[FIXED_COLUMNS:]
            if no_negation:
                if row_extra != [NO_NEGATION]:
                    raise NegParFormatError("inconsistent no-negation marker", line_no)
            elif len(columns) != width:
                raise NegParFormatError(
                    f"wrong column count {len(columns)}, sentence uses {width}", line_no
                )
            try:
                token_id = int(columns[1])
            except ValueError as e:
                raise NegParFormatError(f"token id {columns[1]!r} is not an integer", line_no) from e
            if token_id != expected_id:
                raise NegParFormatError(
                    f"token id {token_id} out of sequence, expected {expected_id}", line_no
                )
            tokens.append(columns[2])
            marks.append([] if no_negation else row_extra)

        n_groups = 0 if no_negation else len(extra) // GROUP_WIDTH
        instances = []
        try:
            for g in range(n_groups):
                cue, event, scope = (
                    _runs([row[g * GROUP_WIDTH + k] != EMPTY_MARK for row in marks])
                    for k in range(GROUP_WIDTH)
                )
                instances.append(
                    NegInstance(instance_id=g, cue_spans=cue, event_spans=event, scope_spans=scope)
                )
            return AnnotatedSentence(
                sentence_id=sentence_id, tokens=tokens, instances=instances, split=split
            )
        except ValidationError as e:
            reasons = "; ".join(err["msg"] for err in e.errors())
            raise ValidationFailedError(
                f"sentence {sentence_id} (line {first_line}): {reasons}"
            ) from e

    def serialize_negpar(self, sentences: Iterable[AnnotatedSentence]) -> str:
        """Writes sentences back into the annotation layout."""
        blocks = []
        for sentence in sentences:
            groups = [
                (inst.cue_tokens, inst.event_tokens, inst.scope_tokens)
                for inst in sentence.instances
            ]
            rows = []
            for i, surface in enumerate(sentence.tokens):
                columns = [sentence.sentence_id, str(i), surface]
                mark = surface if surface != EMPTY_MARK else "+"
                for group in groups:
                    columns.extend(mark if i in component else EMPTY_MARK for component in group)
                rows.append("\t".join(columns))
            blocks.append("\n".join(rows) + "\n")
        return "\n".join(blocks)

    @staticmethod
    def corpus_stats(sentences: Iterable[AnnotatedSentence]) -> CorpusStats:
        """Counts instances having cues, events and scope."""
        stats = CorpusStats()
        for sentence in sentences:
            stats.sentences += 1
            for inst in sentence.instances:
                stats.instances += 1
                stats.cue += bool(inst.cue_spans)
                stats.event += bool(inst.event_spans)
                stats.scope += bool(inst.scope_spans)
        return stats

    @staticmethod
    def pair_sentences(
        source: Sequence[AnnotatedSentence],
        target: Sequence[AnnotatedSentence],
        split: Split,
    ) -> List[ParallelPair]:
        """Matches source and target sentences by sentence id."""
        by_id = {s.sentence_id: s for s in target}
        pairs = []
        for src in source:
            tgt = by_id.get(src.sentence_id)
            if tgt is None:
                logger.warning("No target sentence for pair %s, skipped", src.sentence_id)
                continue
            pairs.append(ParallelPair(pair_id=src.sentence_id, source=src, target=tgt, split=split))
        return pairs
