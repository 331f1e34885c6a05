"""src/apps/tracestore/services/states.py."""

from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from src.apps.negdata.services.alignment import SubwordAligner
from src.apps.tracestore.schemas import ModelTrace
from src.core.enum import Pooling, Side
from src.core.exceptions import BadRequestError, ValidationFailedError


class HiddenStateReader:
    """
    Pulls word-level (or subword-level) hidden states out of a trace.
    Encoder layer 0 is the embedding layer; decoder layers start at 1.
    """

    def __init__(self, aligner: SubwordAligner, special_tokens: Iterable[str] = ("</s>", "<s>")):
        self.aligner = aligner
        self.special_tokens = set(special_tokens)

    @staticmethod
    def check_layer(trace: ModelTrace, side: Side, layer: int) -> None:
        """Encoder layers run 0..Le, decoder layers 1..Ld."""
        low, high = (0, trace.dims.enc_layers) if side == Side.ENC else (1, trace.dims.dec_layers)
        if not low <= layer <= high:
            raise BadRequestError(f"{side.value} layer {layer} outside {low}..{high}")

    def layer_states(self, trace: ModelTrace, side: Side, layer: int) -> Tuple[np.ndarray, Optional[List[str]]]:
        """[positions][D] states of one layer with the side's subword tokens."""
        self.check_layer(trace, side, layer)
        if side == Side.ENC:
            return trace.enc_hidden[layer], trace.src_tokens
        return trace.dec_hidden[layer - 1], trace.tgt_tokens

    def _word_ranges(self, words: Sequence[str], subwords: Optional[List[str]], length: int, pair_id: str) -> List[List[int]]:
        if subwords is None:
            if len(words) != length:
                raise ValidationFailedError(
                    f"{pair_id}: {len(words)} words but {length} positions and no subword tokens"
                )
            return [[i] for i in range(length)]
        lead = 0
        while lead < len(subwords) and subwords[lead] in self.special_tokens:
            lead += 1
        end = len(subwords)
        while end > lead and subwords[end - 1] in self.special_tokens:
            end -= 1
        alignment = self.aligner.align_subwords(words, subwords[lead:end])
        return [[lead + p for p in alignment.subwords_of(i)] for i in range(len(words))]

    def word_states(
        self,
        trace: ModelTrace,
        words: Sequence[str],
        side: Side,
        layer: int,
        pooling: Pooling = Pooling.WORD,
    ) -> Tuple[np.ndarray, List[int]]:
        """
        Returns (vectors, word index per vector). Word pooling averages the
        subwords of each word; subword pooling keeps one row per subword.
        """
        states, subwords = self.layer_states(trace, side, layer)
        ranges = self._word_ranges(words, subwords, states.shape[0], trace.pair_id)
        states = states.astype(np.float64)
        if Pooling(pooling) == Pooling.SUBWORD:
            owners = [i for i, positions in enumerate(ranges) for _ in positions]
            return states[[p for positions in ranges for p in positions]], owners
        if not ranges:
            return np.zeros((0, states.shape[1])), []
        return np.stack([states[positions].mean(axis=0) for positions in ranges]), list(range(len(words)))
