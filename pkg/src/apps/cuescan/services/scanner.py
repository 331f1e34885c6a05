"""src/apps/cuescan/services/scanner.py."""

import contextlib
import itertools
import logging
import os
import re
import tempfile
from pathlib import Path
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple, Union

from src.apps.cuescan.schemas import MISMATCH_CELLS, CueLexicon, MismatchTable, TaggedPair
from src.core.enum import FilterPolicy, MatchMode, Quadrant, TextMode
from src.core.exceptions import ResourceNotFoundError, StorageError

logger = logging.getLogger(__name__)

CLITIC_RE = re.compile(r"'t\b|\w+?(?='t\b)|\w+|[^\w\s]")

MORPHOLOGY_CAVEAT = (
    "word-mode matching ignores morphological negation (un-, in-, -less and the like); "
    "cue counts on that side are a lower bound"
)

RawPair = Tuple[Optional[str], Optional[str]]

UNREADABLE_SAMPLE = 5


def tokenize_for_cues(line: str) -> List[str]:
    """
    Lowercased word and punctuation tokens; "don't" becomes ["don", "'t"].
    """
    return CLITIC_RE.findall(line.lower().replace("’", "'"))


def detect_cues(text: Union[str, Sequence[str]], lexicon: CueLexicon) -> List[int]:
    """
    Positions of tokens matching the lexicon. A string is one token in
    character mode and is whitespace split in word mode.
    """
    if isinstance(text, str):
        tokens: Sequence[str] = text.split() if lexicon.match_mode == MatchMode.WORD else [text]
    else:
        tokens = text
    if lexicon.match_mode == MatchMode.WORD:
        entries = set(lexicon.entries)
        return [i for i, tok in enumerate(tokens) if tok.lower() in entries]
    return [i for i, tok in enumerate(tokens) if any(ch in tok for ch in lexicon.entries)]


def read_parallel(src_path: Path, tgt_path: Path) -> Iterator[RawPair]:
    """
    Streams line pairs of two plain-text files. A side that is missing
    or not valid UTF-8 comes back as None.
    """

    def lines(path: Path) -> Iterator[Optional[str]]:
        try:
            with open(path, "rb") as fh:
                for raw in fh:
                    try:
                        yield raw.decode("utf-8").rstrip("\r\n")
                    except UnicodeDecodeError:
                        yield None
        except FileNotFoundError as e:
            raise ResourceNotFoundError(f"Corpus not found: {path}") from e

    yield from itertools.zip_longest(lines(src_path), lines(tgt_path))


class CueScanner:
    """
    Classifies parallel sentence pairs by cue presence on each side and
    keeps single-pass counts.
    """

    def __init__(self, src_lexicon: CueLexicon, tgt_lexicon: CueLexicon, text_mode: TextMode = TextMode.TOKENIZED):
        self.src_lexicon = src_lexicon
        self.tgt_lexicon = tgt_lexicon
        self.text_mode = TextMode(text_mode)

    def _has_cue(self, text: Union[str, Sequence[str]], lexicon: CueLexicon) -> bool:
        if isinstance(text, str) and lexicon.match_mode == MatchMode.WORD and self.text_mode == TextMode.TOKENIZED:
            text = tokenize_for_cues(text)
        return bool(detect_cues(text, lexicon))

    def classify_pair(self, src: Union[str, Sequence[str]], tgt: Union[str, Sequence[str]]) -> Quadrant:
        """Quadrant of one pair from the two cue detections."""
        src_cue = self._has_cue(src, self.src_lexicon)
        tgt_cue = self._has_cue(tgt, self.tgt_lexicon)
        if src_cue and tgt_cue:
            return Quadrant.BOTH
        if src_cue:
            return Quadrant.EN_ONLY
        if tgt_cue:
            return Quadrant.ZH_ONLY
        return Quadrant.NEITHER

    def new_table(self) -> MismatchTable:
        return MismatchTable(text_mode=self.text_mode)

    def _tag(self, pairs: Iterable[RawPair], table: MismatchTable) -> Iterator[TaggedPair]:
        skipped: List[int] = []
        for line_no, (src, tgt) in enumerate(pairs, start=1):
            if src is None or tgt is None:
                table.unreadable += 1
                if len(skipped) < UNREADABLE_SAMPLE:
                    skipped.append(line_no)
                logger.debug("Line %d unreadable on %s side, excluded", line_no, "source" if src is None else "target")
                continue
            quadrant = self.classify_pair(src, tgt)
            table.add(quadrant)
            yield TaggedPair(line_no=line_no, src=src, tgt=tgt, quadrant=quadrant)
        if table.unreadable:
            more = ", ..." if table.unreadable > len(skipped) else ""
            logger.warning(
                "%d unreadable line(s) excluded (lines %s%s)",
                table.unreadable, ", ".join(map(str, skipped)), more,
            )

    def mismatch_table(self, pairs: Iterable[RawPair]) -> MismatchTable:
        """Counts every pair of the stream without holding it in memory."""
        table = self.new_table()
        for _ in self._tag(pairs, table):
            pass
        logger.info(
            "Scanned %d pairs, %.1f%% mismatched, %d unreadable",
            table.total, 100 * table.mismatch_rate, table.unreadable,
        )
        return table

    def filter_matched(
        self, pairs: Iterable[RawPair], policy: FilterPolicy = FilterPolicy.DROP_MISMATCH
    ) -> Tuple[Iterator[TaggedPair], MismatchTable]:
        """
        Lazily filtered pairs plus the table of the whole input, which is
        complete once the iterator is exhausted.
        """
        table = self.new_table()
        tagged = self._tag(pairs, table)
        if FilterPolicy(policy) == FilterPolicy.DROP_MISMATCH:
            return (p for p in tagged if p.quadrant not in MISMATCH_CELLS), table
        return tagged, table


def write_filtered(pairs: Iterable[TaggedPair], output_dir: Path, prefix: str, with_tags: bool = False) -> List[Path]:
    """
    Streams pairs into {prefix}.src/.tgt (and .tags) through temp files
    renamed into place once the stream is exhausted.
    """
    suffixes = ["src", "tgt"] + (["tags"] if with_tags else [])
    targets = [output_dir / f"{prefix}.{s}" for s in suffixes]
    try:
        output_dir.mkdir(parents=True, exist_ok=True)
        with contextlib.ExitStack() as stack:
            temps = [
                stack.enter_context(
                    tempfile.NamedTemporaryFile("w", encoding="utf-8", dir=output_dir, suffix=".tmp", delete=False)
                )
                for _ in targets
            ]
            try:
                for pair in pairs:
                    temps[0].write(pair.src + "\n")
                    temps[1].write(pair.tgt + "\n")
                    if with_tags:
                        temps[2].write(pair.quadrant.value + "\n")
            except BaseException:
                for fh in temps:
                    fh.close()
                    os.unlink(fh.name)
                raise
        for fh, target in zip(temps, targets):
            os.replace(fh.name, target)
    except OSError as e:
        raise StorageError(f"Cannot write filtered corpus to {output_dir}: {e}") from e
    logger.info("Filtered corpus written to %s", ", ".join(str(t) for t in targets))
    return targets
