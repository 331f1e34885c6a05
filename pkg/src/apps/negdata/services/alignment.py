"""src/apps/negdata/services/alignment.py."""

from typing import Dict, Literal, Sequence

from src.apps.negdata.schemas import Span, SubwordAlignment
from src.core.exceptions import AlignmentError


class SubwordAligner:
    """
    Maps word tokens onto subword tokens carrying continuation markers.
    Suffix markers ("un@@ happy") are the default; prefix markers ("▁un happy")
    mark the first piece of each word instead.
    """

    def __init__(self, marker: str = "@@", position: Literal["suffix", "prefix"] = "suffix"):
        self.marker = marker
        self.position = position

    def _strip(self, piece: str) -> str:
        if self.position == "suffix" and piece.endswith(self.marker):
            return piece[: -len(self.marker)]
        if self.position == "prefix" and piece.startswith(self.marker):
            return piece[len(self.marker):]
        return piece

    def _continues(self, piece: str) -> bool:
        """True if the piece says the word goes on after it."""
        return self.position == "suffix" and piece.endswith(self.marker)

    def _opens(self, piece: str) -> bool:
        """True if the piece says a new word starts with it."""
        return self.position == "prefix" and piece.startswith(self.marker)

    def align_subwords(self, words: Sequence[str], subwords: Sequence[str]) -> SubwordAlignment:
        """Returns the contiguous subword range of every word."""
        mapping: Dict[int, Span] = {}
        j = 0
        for i, word in enumerate(words):
            start = j
            if self.position == "prefix" and j < len(subwords) and not self._opens(subwords[j]):
                raise AlignmentError(
                    f"word {i} ({word!r}) starts on continuation piece {subwords[j]!r}"
                )
            rebuilt = ""
            while j < len(subwords) and len(rebuilt) < len(word):
                if j > start and self._opens(subwords[j]):
                    break
                rebuilt += self._strip(subwords[j])
                j += 1
                if not word.startswith(rebuilt):
                    break
            if rebuilt != word or j == start or self._continues(subwords[j - 1]):
                raise AlignmentError(
                    f"word {i} ({word!r}) diverges from subwords "
                    f"{list(subwords[start:j + 1])}"
                )
            mapping[i] = (start, j - 1)
        if j != len(subwords):
            raise AlignmentError(
                f"subwords {list(subwords[j:])} left over after the last word"
            )
        return SubwordAlignment(word_to_subwords=mapping)
